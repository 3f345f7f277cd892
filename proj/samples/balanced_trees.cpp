// Builds maximally blocked maps from random balanced bicolored trees and tallies them by
// face count.
#include <iostream>
#include <map>
#include <random>

#include "mobiles/mobiles.hpp"

using namespace mobiles;

int main() {
  std::mt19937_64 rng(5);
  std::map<int, int> by_faces;
  for (int i = 0; i < 200; ++i) {
    BicoloredTree t = random_balanced_tree(rng, 10);
    MatchedMap m = leaf_matching(t);
    if (!validate_blocking(m.config).valid) {
      std::cerr << "tree " << i << " gave an invalid configuration\n";
      return 1;
    }
    ++by_faces[m.config.map.faces()];
  }
  for (auto [f, n] : by_faces) std::cout << f << " faces: " << n << "\n";
}
