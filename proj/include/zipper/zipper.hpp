#pragma once

// Umbrella include for the whole library.

#include "zipper/boundary_law.hpp"
#include "zipper/gibbs.hpp"
#include "zipper/io.hpp"
#include "zipper/model.hpp"
#include "zipper/numeric.hpp"
#include "zipper/oracle.hpp"
#include "zipper/parallel.hpp"
#include "zipper/thermo.hpp"
#include "zipper/tree.hpp"
