#pragma once

#include "morgan/admissible.hpp"
#include "morgan/canonical.hpp"
#include "morgan/decouple.hpp"
#include "morgan/io.hpp"
#include "morgan/linalg.hpp"
#include "morgan/matrix.hpp"
#include "morgan/param.hpp"
#include "morgan/poly.hpp"
#include "morgan/poly_matrix.hpp"
#include "morgan/rational.hpp"
#include "morgan/rng.hpp"
#include "morgan/square_system.hpp"
#include "morgan/squaring.hpp"
#include "morgan/zeros.hpp"
