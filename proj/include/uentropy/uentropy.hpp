#pragma once

// Utility-maximising entropy toolkit: discrete u-entropy, relative
// u-entropy, and the classical quantities they unify (Shannon, KL, Renyi,
// Sharma-Mittal, Friedman-Huang-Sandow, Arimoto, Frittelli).

#include "uentropy/discrete.hpp"
#include "uentropy/errors.hpp"
#include "uentropy/ext_real.hpp"
#include "uentropy/identity_suite.hpp"
#include "uentropy/prob_vector.hpp"
#include "uentropy/related.hpp"
#include "uentropy/solver.hpp"
#include "uentropy/utility.hpp"
