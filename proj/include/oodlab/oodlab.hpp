#ifndef OODLAB_OODLAB_HPP
#define OODLAB_OODLAB_HPP

#include "oodlab/auc.hpp"
#include "oodlab/common.hpp"
#include "oodlab/conditions.hpp"
#include "oodlab/counterexamples.hpp"
#include "oodlab/domain.hpp"
#include "oodlab/fcnn.hpp"
#include "oodlab/hypothesis.hpp"
#include "oodlab/io.hpp"
#include "oodlab/lab.hpp"
#include "oodlab/learners.hpp"
#include "oodlab/risk.hpp"

#endif
