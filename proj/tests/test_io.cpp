#include <doctest.h>

#include "lsgan/error.hpp"
#include "lsgan/io.hpp"

using namespace lsgan;

TEST_CASE("grid csv round trip") {
  DensityGrid grid;
  grid.spec = {-2.0, 2.0, -1.0, 3.0, 5};
  grid.values.assign(25, 0.0);
  for (int iy = 0; iy < 5; ++iy)
    for (int ix = 0; ix < 5; ++ix) grid.at(iy, ix) = 0.1 * iy + 1e-17 * ix + ix;
  std::string csv = grid_to_csv(grid);
  DensityGrid back = grid_from_csv(csv);
  CHECK(back.spec.resolution == 5);
  CHECK(back.spec.x_min == -2.0);
  CHECK(back.spec.y_max == 3.0);
  CHECK(back.values == grid.values);  // %.17g round-trips exactly
  CHECK(grid_to_csv(back) == csv);
}

TEST_CASE("grid csv rejects malformed input") {
  CHECK_THROWS_AS(grid_from_csv(""), IoError);
  CHECK_THROWS_AS(grid_from_csv("x_min,x_max,y_min,y_max,resolution\n1,2,3,4\n"),
                  IoError);
  CHECK_THROWS_AS(
      grid_from_csv("x_min,x_max,y_min,y_max,resolution\n0,1,0,1,2\n1,2\n"), IoError);
  CHECK_THROWS_AS(
      grid_from_csv("x_min,x_max,y_min,y_max,resolution\n0,1,0,1,2\n1,a\n3,4\n"),
      IoError);
}

TEST_CASE("ppm rendering") {
  DensityGrid grid;
  grid.spec = {-1.0, 1.0, -1.0, 1.0, 3};
  grid.values.assign(9, 0.0);

  SUBCASE("all-zero grid renders the lowest color everywhere") {
    std::string ppm = grid_to_ppm(grid);
    std::string header = "P6\n3 3\n255\n";
    REQUIRE(ppm.substr(0, header.size()) == header);
    CHECK(ppm.size() == header.size() + 9 * 3);
    for (std::size_t i = header.size(); i < ppm.size(); ++i) CHECK(ppm[i] == '\0');
  }
  SUBCASE("deterministic bytes and monotone colormap") {
    grid.at(0, 0) = 0.25;
    grid.at(1, 1) = 0.5;
    grid.at(2, 2) = 1.0;
    std::string a = grid_to_ppm(grid);
    std::string b = grid_to_ppm(grid);
    CHECK(a == b);
    // the maximum cell saturates to white
    std::size_t header = std::string("P6\n3 3\n255\n").size();
    // top image row corresponds to iy = 2; its last pixel is the max
    auto px = [&](int row, int col, int ch) {
      return static_cast<unsigned char>(a[header + (row * 3 + col) * 3 + ch]);
    };
    CHECK(px(0, 2, 0) == 255);
    CHECK(px(0, 2, 1) == 255);
    CHECK(px(0, 2, 2) == 255);
    // half intensity is past red, not yet white
    CHECK(px(1, 1, 0) == 255);
    CHECK(px(1, 1, 1) < 255);
  }
}

TEST_CASE("samples csv") {
  Matrix pts(2, 2);
  pts.at(0, 0) = 0.5;
  pts.at(0, 1) = -1.25;
  pts.at(1, 0) = 3.0;
  pts.at(1, 1) = 0.0;
  CHECK(samples_csv(pts, {4, 7}) == "x,y,label\n0.5,-1.25,4\n3,0,7\n");
  CHECK(samples_csv(pts, {}) == "x,y\n0.5,-1.25\n3,0\n");
  CHECK_THROWS_AS(samples_csv(pts, {1}), ConfigError);
}

TEST_CASE("format_double round-trips exactly") {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, -4.539786870243439e-05, 0.0}) {
    CHECK(std::stod(format_double(v)) == v);
  }
}
