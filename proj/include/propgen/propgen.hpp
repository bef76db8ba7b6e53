#pragma once

// Umbrella header: uniform random generation of propositional formulae over
// arbitrary finite signatures, with exact counting of the sampled spaces,
// a brute-force enumeration oracle, and a chi-square uniformity harness.

#include "propgen/bigcount.hpp"
#include "propgen/counting.hpp"
#include "propgen/enumerate.hpp"
#include "propgen/errors.hpp"
#include "propgen/formula.hpp"
#include "propgen/generators.hpp"
#include "propgen/json_ast.hpp"
#include "propgen/parse.hpp"
#include "propgen/random.hpp"
#include "propgen/signature.hpp"
#include "propgen/stats.hpp"
