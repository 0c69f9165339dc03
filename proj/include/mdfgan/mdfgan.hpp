#pragma once

#include "mdfgan/core/error.hpp"
#include "mdfgan/core/format.hpp"
#include "mdfgan/core/random.hpp"

#include "mdfgan/nn/activation.hpp"
#include "mdfgan/nn/adam.hpp"
#include "mdfgan/nn/dense_network.hpp"
#include "mdfgan/nn/serialization.hpp"

#include "mdfgan/data/csv.hpp"
#include "mdfgan/data/dataset.hpp"
#include "mdfgan/data/lhs.hpp"
#include "mdfgan/data/normalizer.hpp"
#include "mdfgan/data/types.hpp"

#include "mdfgan/gan/checkpoint.hpp"
#include "mdfgan/gan/config.hpp"
#include "mdfgan/gan/model.hpp"
#include "mdfgan/gan/training.hpp"

#include "mdfgan/bench/baselines.hpp"
#include "mdfgan/bench/benchmarks.hpp"
#include "mdfgan/bench/experiment.hpp"
#include "mdfgan/bench/metrics.hpp"
#include "mdfgan/bench/report.hpp"
