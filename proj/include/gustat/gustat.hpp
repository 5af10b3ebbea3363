#pragma once

#include "gustat/bounds.hpp"
#include "gustat/contraction.hpp"
#include "gustat/cumulants.hpp"
#include "gustat/enumerate.hpp"
#include "gustat/errors.hpp"
#include "gustat/exact.hpp"
#include "gustat/experiment.hpp"
#include "gustat/io.hpp"
#include "gustat/model.hpp"
#include "gustat/motif.hpp"
#include "gustat/partition.hpp"
#include "gustat/rational.hpp"
#include "gustat/reports.hpp"
#include "gustat/rcm.hpp"
#include "gustat/rng.hpp"
#include "gustat/stats.hpp"
