#pragma once

#include "oppminer/clustering.hpp"
#include "oppminer/core.hpp"
#include "oppminer/dataset.hpp"
#include "oppminer/fusion.hpp"
#include "oppminer/matcher.hpp"
#include "oppminer/miner.hpp"
#include "oppminer/parallel.hpp"
