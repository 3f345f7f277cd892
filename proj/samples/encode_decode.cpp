// Encodes a pointed map with a blocked edge as a mobile and decodes it again.
// Usage: encode_decode [map.json]
#include <fstream>
#include <iostream>
#include <sstream>

#include "mobiles/mobiles.hpp"

using namespace mobiles;

int main(int argc, char** argv) {
  std::string text = R"({"darts":6,"sigma":[6,3,2,5,4,1],"blocked_darts":[5],"origin_vertex":1})";
  if (argc > 1) {
    std::ifstream in(argv[1]);
    std::stringstream buf;
    buf << in.rdbuf();
    text = buf.str();
  }
  try {
    BlockedConfig c = map_from_json(parse_json(text));
    auto v = validate_blocking(c);
    if (!v.valid) {
      std::cerr << "invalid blocking: " << v.witness << "\n";
      return 2;
    }
    auto dist = distances(c);
    std::cout << "distances from the origin:";
    for (int d : dist) std::cout << " " << d;
    std::cout << "\n";

    Mobile mob = to_mobile(c);
    std::cout << "mobile: " << mobile_to_json(mob, c.mode).dump() << "\n";
    std::cout << "contour:";
    for (const Token& t : contour_word(mob)) std::cout << " " << (t.corner ? "" : "f") << t.label;
    std::cout << "\n";

    BlockedConfig back = from_mobile(mob, c.mode);
    std::cout << "decoded: " << map_to_json(back).dump() << "\n";
    std::cout << (config_key(back) == config_key(c) ? "same decorated map\n" : "MISMATCH\n");
    return config_key(back) == config_key(c) ? 0 : 1;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
}
