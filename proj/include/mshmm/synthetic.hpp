#ifndef MSHMM_SYNTHETIC_HPP
#define MSHMM_SYNTHETIC_HPP

#include <cstdint>

#include "mshmm/datapipe.hpp"
#include "mshmm/hmm.hpp"

namespace mshmm {

// Ground-truth generator for recovery tests. Covariate columns are iid
// standard Normal unless a matrix is supplied; an optional AR(1) column
// (filled with y_{t-1} during simulation) comes last. The transition model
// consumes the same design as the mean equation.
struct GenerativeSpec {
  int states = 1;
  EmissionParams emissions;
  TransitionModel transitions = TransitionModel::constant(Eigen::MatrixXd::Identity(1, 1));
  int covariates = 0;               // iid N(0,1) columns
  Eigen::MatrixXd covariate_matrix; // optional user-supplied T x covariates block
  bool ar_term = false;
  int T = 0;
  std::uint64_t seed = 0;

  void validate() const;
};

struct Generated {
  AlignedDataset data;
  StatePath truth;
};

Generated generate(const GenerativeSpec& spec);

}  // namespace mshmm

#endif
