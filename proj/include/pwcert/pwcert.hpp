#pragma once

#include "pwcert/certlib.hpp"
#include "pwcert/errors.hpp"
#include "pwcert/geometry.hpp"
#include "pwcert/onedim.hpp"
#include "pwcert/oscint.hpp"
#include "pwcert/quadrature.hpp"
#include "pwcert/specfun.hpp"
#include "pwcert/types.hpp"
