#pragma once

#include "hybridlink/channel/access.hpp"
#include "hybridlink/channel/fso.hpp"
#include "hybridlink/channel/pointing.hpp"
#include "hybridlink/channel/thz.hpp"
#include "hybridlink/error.hpp"
#include "hybridlink/mc/estimate.hpp"
#include "hybridlink/mc/rng.hpp"
#include "hybridlink/mc/samplers.hpp"
#include "hybridlink/mc/trace.hpp"
#include "hybridlink/metrics/link_metrics.hpp"
#include "hybridlink/metrics/modulation.hpp"
#include "hybridlink/metrics/system.hpp"
#include "hybridlink/specfun/bessel.hpp"
#include "hybridlink/specfun/erfc.hpp"
#include "hybridlink/specfun/gamma.hpp"
#include "hybridlink/specfun/hypergeometric.hpp"
#include "hybridlink/specfun/meijer_g.hpp"
#include "hybridlink/specfun/quadrature.hpp"
#include "hybridlink/switching.hpp"
