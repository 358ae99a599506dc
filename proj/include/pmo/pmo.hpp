#pragma once

// convenience umbrella for the whole library

#include "pmo/hierarchy.hpp"
#include "pmo/ipm.hpp"
#include "pmo/moment.hpp"
#include "pmo/monomial.hpp"
#include "pmo/optimality.hpp"
#include "pmo/polymatrix.hpp"
#include "pmo/polynomial.hpp"
#include "pmo/problem_io.hpp"
#include "pmo/relaxation.hpp"
#include "pmo/report.hpp"
#include "pmo/sdp.hpp"
#include "pmo/sdp_json.hpp"
#include "pmo/sosconvex.hpp"
#include "pmo/svec.hpp"
#include "pmo/tms.hpp"
