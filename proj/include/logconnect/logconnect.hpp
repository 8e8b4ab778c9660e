#pragma once

#include "errors.hpp"
#include "scalar.hpp"
#include "grid.hpp"
#include "linalg.hpp"
#include "polynomial.hpp"
#include "rational_function.hpp"
#include "connection.hpp"
#include "predicates.hpp"
#include "normalization.hpp"
#include "projective.hpp"
#include "monodromy.hpp"
#include "lifting.hpp"
#include "io.hpp"
