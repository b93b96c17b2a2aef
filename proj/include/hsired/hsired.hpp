#pragma once

#include "hsired/error.hpp"
#include "hsired/random.hpp"

#include "hsired/linalg/matrix.hpp"
#include "hsired/linalg/qr.hpp"
#include "hsired/linalg/randomized.hpp"
#include "hsired/linalg/svd.hpp"
#include "hsired/linalg/synthetic.hpp"

#include "hsired/dimred/pca.hpp"

#include "hsired/hsi/cube.hpp"
#include "hsired/hsi/datasets.hpp"
#include "hsired/hsi/interchange.hpp"
#include "hsired/hsi/samples.hpp"
#include "hsired/hsi/synthetic.hpp"

#include "hsired/classify/gbdt.hpp"
#include "hsired/classify/grid_search.hpp"
#include "hsired/classify/svm.hpp"

#include "hsired/eval/class_map.hpp"
#include "hsired/eval/mcnemar.hpp"
#include "hsired/eval/metrics.hpp"

#include "hsired/serialize.hpp"

#include "hsired/cli/bench.hpp"
#include "hsired/cli/compare.hpp"
#include "hsired/cli/config.hpp"
#include "hsired/cli/inspect.hpp"
#include "hsired/cli/run.hpp"
