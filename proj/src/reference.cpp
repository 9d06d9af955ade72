#include <boost/multiprecision/cpp_bin_float.hpp>

#include "dmn/bench.hpp"
#include "dmn/loglik.hpp"

namespace dmn {

namespace {

using Wide = boost::multiprecision::cpp_bin_float_50;

}  // namespace

double reference_loglik(const AlphaParams& alpha, const CountVector& x) {
    detail::check_dimensions(alpha.size(), x.size());
    detail::check_total(x);

    Wide A = 0;
    for (double a : alpha.alpha()) A += Wide(a);

    Wide rising = 0;
    for (std::size_t k = 0; k < alpha.size(); ++k) {
        const Wide a = alpha[k];
        for (Count j = 0; j < x[k]; ++j) rising += log(a + j);
    }
    Wide total = 0;
    for (Count i = 0; i < x.total(); ++i) total += log(A + i);
    return static_cast<double>(rising - total);
}

}  // namespace dmn
