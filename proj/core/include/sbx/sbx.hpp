#pragma once

#include "sbx/config.hpp"
#include "sbx/corruption.hpp"
#include "sbx/dae.hpp"
#include "sbx/error.hpp"
#include "sbx/experiments.hpp"
#include "sbx/io.hpp"
#include "sbx/linalg.hpp"
#include "sbx/pipeline.hpp"
#include "sbx/rng.hpp"
#include "sbx/spectral.hpp"
#include "sbx/synthetic.hpp"
#include "sbx/training.hpp"
