#pragma once

#include "chains.hpp"
#include "dilator.hpp"
#include "disj.hpp"
#include "errors.hpp"
#include "formula.hpp"
#include "notation.hpp"
#include "order.hpp"
#include "proof.hpp"
#include "sexpr.hpp"
