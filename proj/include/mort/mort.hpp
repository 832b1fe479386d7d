#pragma once

#include "mort/contour.hpp"
#include "mort/dataset.hpp"
#include "mort/descriptor_io.hpp"
#include "mort/distance_map.hpp"
#include "mort/error.hpp"
#include "mort/grid.hpp"
#include "mort/image_io.hpp"
#include "mort/mask.hpp"
#include "mort/matcher.hpp"
#include "mort/parallel.hpp"
#include "mort/patches.hpp"
#include "mort/rng.hpp"
#include "mort/transform.hpp"
