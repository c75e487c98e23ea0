#define SSAROOTS_NO_EXTERN_TEMPLATES
#include "ssaroots/minnorm.hpp"

namespace ssaroots {

template std::vector<std::complex<double>> raw_roots<double>(const Polynomial<double>&);
template Eigen::Matrix<double, Eigen::Dynamic, 1> singular_values<double>(const TrajectoryMatrix<double>&);
template SubspaceBasis<double> trajectory_basis<double>(const TrajectoryMatrix<double>&, int, bool, double);
template SubspaceBasis<double> orthonormalize<double>(const ComplexMatrix<double>&);
template double subspace_distance<double>(const ComplexMatrix<double>&, const ComplexMatrix<double>&);
template ComplexVector<double> detail::solve_banded<double>(ComplexMatrix<double>, ComplexVector<double>, int, int);

}  // namespace ssaroots
