#ifndef TREECF_TREECF_HPP
#define TREECF_TREECF_HPP

#include "treecf/adam.hpp"
#include "treecf/cf_io.hpp"
#include "treecf/cf_search.hpp"
#include "treecf/covariance.hpp"
#include "treecf/datagen.hpp"
#include "treecf/dataset.hpp"
#include "treecf/distance.hpp"
#include "treecf/ensemble.hpp"
#include "treecf/errors.hpp"
#include "treecf/eval.hpp"
#include "treecf/feature_tweak.hpp"
#include "treecf/model_io.hpp"
#include "treecf/parallel.hpp"
#include "treecf/rng.hpp"
#include "treecf/soft_model.hpp"
#include "treecf/train.hpp"
#include "treecf/tree.hpp"

#endif  // TREECF_TREECF_HPP
