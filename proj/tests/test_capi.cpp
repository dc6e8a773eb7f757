#include <doctest.h>

#include <cmath>
#include <cstring>
#include <string>

#include "bitorus/bitorus.h"

namespace {

const char* kDelta = "{\"atoms\":[{\"s_angle\":0.3,\"t_angle\":-0.8,\"weight\":1.0}]}";
const char* kTwoAtom =
    "{\"atoms\":[{\"s_angle\":0.2,\"t_angle\":0.1,\"weight\":0.6},"
    "{\"s_angle\":-0.4,\"t_angle\":0.5,\"weight\":0.4}]}";

}  // namespace

TEST_CASE("measure lifecycle and errors") {
  bt_measure2* m = nullptr;
  REQUIRE(bt_measure2_from_json(kTwoAtom, &m) == BT_OK);
  size_t n = 0;
  CHECK(bt_measure2_atom_count(m, &n) == BT_OK);
  CHECK(n == 2);
  double re = 0, im = 0;
  CHECK(bt_measure2_moment(m, 0, 0, &re, &im) == BT_OK);
  CHECK(re == doctest::Approx(1.0));
  int in_px = 0;
  CHECK(bt_measure2_in_px_class(m, &in_px) == BT_OK);
  CHECK(in_px == 1);
  char* json = nullptr;
  CHECK(bt_measure2_to_json(m, &json) == BT_OK);
  CHECK(std::string(json).find("atoms") != std::string::npos);
  bt_string_free(json);
  bt_measure2_free(m);

  bt_measure2* bad = nullptr;
  CHECK(bt_measure2_from_json("garbage", &bad) == BT_EIO);
  CHECK(std::string(bt_last_error()).size() > 0);
  CHECK(bt_measure2_from_json(nullptr, &bad) == BT_EINVAL);
}

TEST_CASE("transform evaluation through the C surface") {
  bt_measure2* m = nullptr;
  REQUIRE(bt_measure2_from_json(kDelta, &m) == BT_OK);
  double value[2] = {0, 0};
  char comp[3] = {0, 0, 0};
  // sigma of a point mass is 1 everywhere on the window
  CHECK(bt_measure2_eval(m, "sigma", 0.1, 0.05, -0.04, 0.08, value, comp) == BT_OK);
  CHECK(value[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(value[1]) < 1e-12);
  CHECK(std::string(comp) == "DD");
  // eta of the first marginal is multiplication by exp(0.3 i)
  CHECK(bt_measure2_eval(m, "eta1", 0.2, 0.0, 0, 0, value, comp) == BT_OK);
  CHECK(value[0] == doctest::Approx(0.2 * std::cos(0.3)));
  CHECK(value[1] == doctest::Approx(0.2 * std::sin(0.3)));
  // torus-band points are domain errors
  CHECK(bt_measure2_eval(m, "psi", 1.0, 0.0, 0.2, 0.0, value, comp) == BT_EDOMAIN);
  CHECK(bt_measure2_eval(m, "nonsense", 0.1, 0.0, 0.2, 0.0, value, comp) == BT_EINVAL);
  bt_measure2_free(m);
}

TEST_CASE("laws, moments and tables through the C surface") {
  bt_measure2* m = nullptr;
  REQUIRE(bt_measure2_from_json(kDelta, &m) == BT_OK);
  bt_law* law = nullptr;
  REQUIRE(bt_law_from_measure(m, &law) == BT_OK);
  double window = 0;
  CHECK(bt_law_window(law, &window) == BT_OK);
  CHECK(window > 0.0);

  bt_law* squared = nullptr;
  REQUIRE(bt_law_convolve(law, law, &squared) == BT_OK);
  bt_table* table = nullptr;
  char* diag = nullptr;
  REQUIRE(bt_law_moments(squared, 4, 128, 0.4, &table, &diag) == BT_OK);
  CHECK(std::string(diag).find("window_radius") != std::string::npos);
  bt_string_free(diag);

  // delta convolved with itself doubles the angles
  double re = 0, im = 0;
  CHECK(bt_table_get(table, 1, 1, &re, &im) == BT_OK);
  CHECK(re == doctest::Approx(std::cos(2 * (0.3 - 0.8))).epsilon(1e-9));
  CHECK(im == doctest::Approx(std::sin(2 * (0.3 - 0.8))).epsilon(1e-9));

  int order = 0;
  CHECK(bt_table_order(table, &order) == BT_OK);
  CHECK(order == 4);
  char* csv = nullptr;
  CHECK(bt_table_to_csv(table, &csv) == BT_OK);
  CHECK(std::string(csv).substr(0, 10) == "p,q,re,im\n");
  bt_string_free(csv);

  bt_table_free(table);
  bt_law_free(squared);
  bt_law_free(law);
  bt_measure2_free(m);
}

TEST_CASE("id law and limit demo through the C surface") {
  const char* levy =
      "{\"rho1\":{\"atoms\":[{\"s_angle\":0,\"t_angle\":0,\"weight\":0.5}]},"
      "\"rho2\":{\"atoms\":[{\"s_angle\":0,\"t_angle\":0,\"weight\":0.5}]},"
      "\"a\":1.0,\"gamma1_angle\":0,\"gamma2_angle\":0}";
  bt_law* law = nullptr;
  REQUIRE(bt_law_from_levy_json(levy, &law) == BT_OK);
  bt_table* table = nullptr;
  REQUIRE(bt_law_moments(law, 2, 128, 0.4, &table, nullptr) == BT_OK);
  double re = 0, im = 0;
  CHECK(bt_table_get(table, 1, 0, &re, &im) == BT_OK);
  CHECK(re == doctest::Approx(std::exp(-0.5)).epsilon(1e-8));  // mean of the drift marginal
  bt_table_free(table);
  bt_law_free(law);

  long levels[2] = {4, 8};
  double errors[2] = {0, 0};
  CHECK(bt_limit_demo("3.5", 1.0, levels, 2, 2, 64, errors) == BT_OK);
  CHECK(errors[1] < errors[0]);
  CHECK(bt_limit_demo("bogus", 1.0, levels, 2, 2, 64, errors) == BT_EINVAL);
}
