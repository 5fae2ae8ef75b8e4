#pragma once

#include "algebra_map.hpp"
#include "cofreeness.hpp"
#include "element.hpp"
#include "errors.hpp"
#include "frobenius.hpp"
#include "precision.hpp"
#include "qcoh.hpp"
#include "report.hpp"
#include "sheaf_io.hpp"
#include "stack.hpp"
#include "stack_io.hpp"
