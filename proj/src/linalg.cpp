#include "aklab/linalg.hpp"

namespace aklab {

std::vector<Eigen::MatrixXd> sp_basis(int m) {
  if (m < 1) throw std::invalid_argument("sp_basis: m must be positive");
  std::vector<Eigen::MatrixXd> basis;
  const int d = 2 * m;
  for (int block = 0; block < 2; ++block) {
    const int r0 = block == 0 ? 0 : m;
    const int c0 = block == 0 ? m : 0;
    for (int i = 0; i < m; ++i)
      for (int j = i; j < m; ++j) {
        Eigen::MatrixXd e = Eigen::MatrixXd::Zero(d, d);
        e(r0 + i, c0 + j) = 1.0;
        e(r0 + j, c0 + i) = 1.0;
        basis.push_back(e);
      }
  }
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      Eigen::MatrixXd e = Eigen::MatrixXd::Zero(d, d);
      e(i, j) = 1.0;
      e(m + j, m + i) = -1.0;
      basis.push_back(e);
    }
  return basis;
}

}  // namespace aklab
