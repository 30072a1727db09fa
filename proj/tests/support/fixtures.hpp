#ifndef HEADLAYER_TESTS_FIXTURES_HPP
#define HEADLAYER_TESTS_FIXTURES_HPP

#include <string>

#include "headlayer/bracketed.hpp"
#include "headlayer/conll.hpp"
#include "headlayer/treebank.hpp"

namespace fixtures {

// "the dog barks": the -> dog, dog -> barks, barks -> root.
inline const char* kTreeA = "(S (NP (DT the) (NN dog)) (VP (VBZ barks)))";

inline const char* kConllA =
    "1\tthe\t_\t_\tDT\t_\t2\tdet\n"
    "2\tdog\t_\t_\tNN\t_\t3\tnsubj\n"
    "3\tbarks\t_\t_\tVBZ\t_\t0\troot\n\n";

inline headlayer::ConstTree tree_a() {
  return headlayer::parse_bracketed(kTreeA)[0];
}

inline headlayer::DepGraph dep_a() {
  return headlayer::parse_conll(kConllA)[0];
}

inline headlayer::AlignedSentence sentence_a() {
  return {tree_a(), dep_a()};
}

}  // namespace fixtures

#endif
