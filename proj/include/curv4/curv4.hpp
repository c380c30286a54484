#pragma once

#include "curv4/catalog.hpp"
#include "curv4/curvature.hpp"
#include "curv4/errors.hpp"
#include "curv4/extremal.hpp"
#include "curv4/flow.hpp"
#include "curv4/identities.hpp"
#include "curv4/matrix.hpp"
#include "curv4/parallel.hpp"
#include "curv4/pinching.hpp"
#include "curv4/sharp.hpp"
