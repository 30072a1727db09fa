#ifndef HEADLAYER_HPP
#define HEADLAYER_HPP

#include "headlayer/bracketed.hpp"
#include "headlayer/classifier.hpp"
#include "headlayer/conll.hpp"
#include "headlayer/conversion.hpp"
#include "headlayer/dep_graph.hpp"
#include "headlayer/error.hpp"
#include "headlayer/evaluation.hpp"
#include "headlayer/head_assignment.hpp"
#include "headlayer/head_induction.hpp"
#include "headlayer/labels.hpp"
#include "headlayer/parallel.hpp"
#include "headlayer/percolation.hpp"
#include "headlayer/transfer.hpp"
#include "headlayer/transform.hpp"
#include "headlayer/tree.hpp"
#include "headlayer/treebank.hpp"

#endif
