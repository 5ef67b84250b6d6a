#pragma once

#include "k3carpet/budget.hpp"
#include "k3carpet/carpet.hpp"
#include "k3carpet/errors.hpp"
#include "k3carpet/groebner.hpp"
#include "k3carpet/io.hpp"
#include "k3carpet/linalg.hpp"
#include "k3carpet/pipeline.hpp"
#include "k3carpet/ring.hpp"
#include "k3carpet/schreyer.hpp"
#include "k3carpet/strands.hpp"
