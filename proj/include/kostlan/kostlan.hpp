#pragma once

#include "kostlan/ensemble.hpp"
#include "kostlan/entropy.hpp"
#include "kostlan/experiment.hpp"
#include "kostlan/field_metric.hpp"
#include "kostlan/projective.hpp"
#include "kostlan/serialize.hpp"
#include "kostlan/solver.hpp"
#include "kostlan/stats.hpp"
#include "kostlan/study.hpp"
#include "kostlan/szego.hpp"
#include "kostlan/version.hpp"
