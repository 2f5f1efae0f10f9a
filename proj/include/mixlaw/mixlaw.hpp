#pragma once

#include "characterization.hpp"
#include "dataset_csv.hpp"
#include "error.hpp"
#include "fitting.hpp"
#include "generator.hpp"
#include "inversion.hpp"
#include "mean.hpp"
#include "types.hpp"
