// Prints d, h, the regulator and the norm of the fundamental unit for the
// fundamental discriminants in [lo, hi].
//   unit_table 5 200

#include <cstdio>
#include <cstdlib>

#include "qrl/classno.hpp"

int main(int argc, char** argv)
{
    qrl::Int lo = argc > 1 ? std::atoll(argv[1]) : 5;
    qrl::Int hi = argc > 2 ? std::atoll(argv[2]) : 100;
    std::printf("d\th\tregulator\tnorm\n");
    for (qrl::Int d = lo; d <= hi; ++d) {
        if (!qrl::is_fundamental_discriminant(d)) continue;
        auto u = qrl::fundamental_unit(d);
        std::printf("%lld\t%lld\t%.12Lf\t%+d\n", static_cast<long long>(d),
                    static_cast<long long>(qrl::class_number_forms(d).h), u.regulator, u.norm_sign);
    }
}
