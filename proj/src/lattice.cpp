#include "lattice.hpp"

#include <cmath>

namespace cellia {

std::complex<double> embed(Eisenstein z) {
  const double sqrt3 = std::sqrt(3.0);
  return {static_cast<double>(z.a) - static_cast<double>(z.b) / 2.0,
          static_cast<double>(z.b) * sqrt3 / 2.0};
}

const char* coset_name(Coset c) {
  switch (c) {
    case Coset::Square: return "square";
    case Coset::Circle: return "circle";
    case Coset::Diamond: return "diamond";
  }
  return "?";
}

std::string to_string(Eisenstein z) {
  std::string s = std::to_string(z.a);
  if (z.b >= 0)
    s += "+" + std::to_string(z.b) + "w";
  else
    s += std::to_string(z.b) + "w";
  return s;
}

}  // namespace cellia
