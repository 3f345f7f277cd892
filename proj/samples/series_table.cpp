// Prints the first coefficients of the forest series at a few values of y, and the
// hard particle series with the particle weight set to 1.
#include <iostream>

#include "mobiles/mobiles.hpp"

using namespace mobiles;

int main() {
  auto fo = forest(6);
  for (const char* y : {"0", "1", "2"}) {
    GSeries r = fo.R.substitute("y", parse_poly(y));
    std::cout << "forest R at y = " << y << ":";
    for (int n = 0; n <= r.order(); ++n) std::cout << " " << r[n];
    std::cout << "\n";
  }
  auto hp = triangulation_hp(8);
  GSeries g = hp.G->substitute("z1", AuxPoly(1));
  std::cout << "hard particles G at z1 = 1:";
  for (int n = 0; n <= g.order(); n += 2) std::cout << " " << g[n];
  std::cout << "\n";
}
