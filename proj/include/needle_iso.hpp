#pragma once

#include "needle_iso/binomial.hpp"
#include "needle_iso/concavity.hpp"
#include "needle_iso/cross_spaces.hpp"
#include "needle_iso/density.hpp"
#include "needle_iso/error.hpp"
#include "needle_iso/isoperimetry.hpp"
#include "needle_iso/needle_bound.hpp"
#include "needle_iso/oracles.hpp"
#include "needle_iso/parallel.hpp"
#include "needle_iso/property_suite.hpp"
#include "needle_iso/quadrature.hpp"
#include "needle_iso/random.hpp"
#include "needle_iso/separation.hpp"
#include "needle_iso/serialization.hpp"
