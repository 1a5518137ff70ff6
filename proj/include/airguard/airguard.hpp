#pragma once

#include "airguard/binary_io.hpp"
#include "airguard/channel.hpp"
#include "airguard/common.hpp"
#include "airguard/config_json.hpp"
#include "airguard/dataset.hpp"
#include "airguard/features.hpp"
#include "airguard/fft.hpp"
#include "airguard/image.hpp"
#include "airguard/kinematics.hpp"
#include "airguard/rng.hpp"
#include "airguard/targets.hpp"
