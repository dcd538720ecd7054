#pragma once

#include "honlm/bench.hpp"
#include "honlm/high_order.hpp"
#include "honlm/image.hpp"
#include "honlm/metrics.hpp"
#include "honlm/nlm.hpp"
#include "honlm/parallel.hpp"
#include "honlm/pnm.hpp"
#include "honlm/random.hpp"
#include "honlm/regression.hpp"
#include "honlm/superres.hpp"
