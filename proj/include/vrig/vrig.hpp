#pragma once

// Umbrella header: the whole library.

#include "vrig/boxes.hpp"
#include "vrig/cmaes.hpp"
#include "vrig/errors.hpp"
#include "vrig/geometry.hpp"
#include "vrig/image.hpp"
#include "vrig/metric.hpp"
#include "vrig/presets.hpp"
#include "vrig/random.hpp"
#include "vrig/rig_io.hpp"
#include "vrig/rig_param.hpp"
#include "vrig/scenegen.hpp"
#include "vrig/text.hpp"
#include "vrig/warp.hpp"
