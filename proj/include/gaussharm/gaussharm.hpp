#pragma once

#include "gaussharm/error.hpp"
#include "gaussharm/linalg.hpp"
#include "gaussharm/lie_algebra.hpp"
#include "gaussharm/metric.hpp"
#include "gaussharm/structure.hpp"
#include "gaussharm/harmonicity.hpp"
#include "gaussharm/nilpotent.hpp"
#include "gaussharm/document.hpp"
#include "gaussharm/tasks.hpp"
