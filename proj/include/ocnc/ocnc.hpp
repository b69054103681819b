#pragma once

#include "ocnc/ads/ad_io.hpp"
#include "ocnc/ads/advertisement.hpp"
#include "ocnc/ads/features.hpp"
#include "ocnc/ads/influence.hpp"
#include "ocnc/concepts/article_source.hpp"
#include "ocnc/concepts/classifier.hpp"
#include "ocnc/concepts/http_source.hpp"
#include "ocnc/concepts/scorer.hpp"
#include "ocnc/concepts/scraper.hpp"
#include "ocnc/core/combination.hpp"
#include "ocnc/core/concept_node.hpp"
#include "ocnc/core/error.hpp"
#include "ocnc/core/rng.hpp"
#include "ocnc/core/text.hpp"
#include "ocnc/harness/config.hpp"
#include "ocnc/harness/data.hpp"
#include "ocnc/harness/pipeline.hpp"
#include "ocnc/harness/svg_chart.hpp"
#include "ocnc/harness/sweep.hpp"
#include "ocnc/harness/synthetic.hpp"
#include "ocnc/regress/adaboost.hpp"
#include "ocnc/regress/dataset.hpp"
#include "ocnc/regress/forest.hpp"
#include "ocnc/regress/mlp.hpp"
#include "ocnc/regress/model.hpp"
#include "ocnc/regress/pearson.hpp"
#include "ocnc/regress/tree.hpp"
#include "ocnc/solve/solvers.hpp"
#include "ocnc/solve/value_function.hpp"
