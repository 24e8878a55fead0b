#include "incidence_lab/polynomial.hpp"

namespace incidence_lab {

std::vector<Exponent3> monomials_up_to(int degree) {
  std::vector<Exponent3> out;
  for (int total = degree; total >= 0; --total)
    for (int a = total; a >= 0; --a)
      for (int b = total - a; b >= 0; --b) out.push_back({a, b, total - a - b});
  return out;
}

}  // namespace incidence_lab
