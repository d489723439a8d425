#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstdlib>
#include <string>
#include <vector>

#include "doctest.h"
#include "probact/kernels.hpp"
#include "testutil.hpp"

using namespace probact;

namespace {

std::vector<double> random_values(testutil::Rng& rng, std::size_t n) {
  std::vector<double> out(n);
  for (double& v : out) v = testutil::unit(rng) * 2.0 - 1.0;
  return out;
}

}  // namespace

TEST_SUITE("kernels") {
  TEST_CASE("the scalar table is always first and the active one is listed") {
    const std::vector<const kern::KernelTable*> tables =
        kern::available_tables();
    REQUIRE(!tables.empty());
    CHECK(tables[0]->name == "scalar");
    bool found = false;
    for (const kern::KernelTable* t : tables)
      if (t == &kern::active()) found = true;
    CHECK(found);
  }

  TEST_CASE("environment override is honored when it names a real table") {
    if (const char* want = std::getenv("PROBACT_KERNELS")) {
      bool known = false;
      for (const kern::KernelTable* t : kern::available_tables())
        if (t->name == want) known = true;
      if (known) CHECK(kern::active().name == want);
    }
  }

  TEST_CASE("every table matches the scalar table bit for bit") {
    const kern::KernelTable& scalar = kern::scalar_table();
    testutil::Rng rng(20260816);
    for (const kern::KernelTable* table : kern::available_tables()) {
      CAPTURE(table->name);
      for (std::size_t n :
           {std::size_t{0}, std::size_t{1}, std::size_t{2}, std::size_t{3},
            std::size_t{4}, std::size_t{5}, std::size_t{7}, std::size_t{8},
            std::size_t{13}, std::size_t{32}, std::size_t{67},
            std::size_t{256}}) {
        CAPTURE(n);
        const std::vector<double> a = random_values(rng, n);
        const std::vector<double> b = random_values(rng, n);
        const double k = testutil::unit(rng) * 3.0 - 1.5;

        CHECK(table->sum(a) == scalar.sum(a));
        CHECK(table->dot(a, b) == scalar.dot(a, b));
        CHECK(table->max_abs_diff(a, b) == scalar.max_abs_diff(a, b));

        std::vector<double> x = a, y = a;
        table->scale(x, k);
        scalar.scale(y, k);
        CHECK(x == y);

        x = a;
        y = a;
        table->add(x, b);
        scalar.add(y, b);
        CHECK(x == y);

        std::vector<double> dst1(n, 0.0), dst2(n, 0.0);
        table->mul(dst1, a, b);
        scalar.mul(dst2, a, b);
        CHECK(dst1 == dst2);

        table->mul_scalar(dst1, a, k);
        scalar.mul_scalar(dst2, a, k);
        CHECK(dst1 == dst2);

        x = a;
        y = a;
        table->axpy(x, b, k);
        scalar.axpy(y, b, k);
        CHECK(x == y);
      }
    }
  }

  TEST_CASE("kernel arithmetic agrees with plain accumulation") {
    testutil::Rng rng(7);
    const std::vector<double> a = random_values(rng, 129);
    const std::vector<double> b = random_values(rng, 129);
    double plain_sum = 0.0, plain_dot = 0.0, plain_worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      plain_sum += a[i];
      plain_dot += a[i] * b[i];
      plain_worst = std::max(plain_worst, std::abs(a[i] - b[i]));
    }
    CHECK(kern::sum(a) == doctest::Approx(plain_sum).epsilon(1e-12));
    CHECK(kern::dot(a, b) == doctest::Approx(plain_dot).epsilon(1e-12));
    CHECK(kern::max_abs_diff(a, b) == plain_worst);
  }
}
