#pragma once

#include "beamset/beams.hpp"
#include "beamset/common.hpp"
#include "beamset/gram.hpp"
#include "beamset/linalg.hpp"
#include "beamset/localize.hpp"
#include "beamset/ortho.hpp"
#include "beamset/pipeline.hpp"
#include "beamset/quad.hpp"
#include "beamset/sphere.hpp"
