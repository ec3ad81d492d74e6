#pragma once

// Umbrella header for the gaitlab library.

#include "gaitlab/corruption.hpp"
#include "gaitlab/dataset_io.hpp"
#include "gaitlab/error.hpp"
#include "gaitlab/gallery.hpp"
#include "gaitlab/geometric.hpp"
#include "gaitlab/harness.hpp"
#include "gaitlab/kmeans.hpp"
#include "gaitlab/metrics.hpp"
#include "gaitlab/model.hpp"
#include "gaitlab/rng.hpp"
#include "gaitlab/sample.hpp"
#include "gaitlab/scatter.hpp"
#include "gaitlab/skeleton.hpp"
#include "gaitlab/split.hpp"
#include "gaitlab/synthetic.hpp"
