#pragma once

#include "permbo/acquisition.hpp"
#include "permbo/config.hpp"
#include "permbo/error.hpp"
#include "permbo/experiment.hpp"
#include "permbo/featurize.hpp"
#include "permbo/gp.hpp"
#include "permbo/instance_io.hpp"
#include "permbo/kernel.hpp"
#include "permbo/permutation.hpp"
#include "permbo/problems.hpp"
