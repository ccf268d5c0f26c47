// Each library invariant as its own test, run through the seeded property
// suites. ctest runs one process per suite, so each suite executes once.

#include <map>
#include <string>

#include <gtest/gtest.h>

#include "needle_iso.hpp"

namespace ni = needle_iso;

namespace {

constexpr std::uint64_t kSeed = 42;

const ni::PropertyReport& report_for(const std::string& suite) {
  static std::map<std::string, ni::PropertyReport> cache;
  auto it = cache.find(suite);
  if (it == cache.end()) it = cache.emplace(suite, ni::run_property_suite(suite, ni::RngSpec{kSeed})).first;
  return it->second;
}

std::string suite_of(std::string_view check_id) {
  return std::string(check_id.substr(0, check_id.find('.')));
}

class Invariant : public ::testing::TestWithParam<ni::CoverageEntry> {};

TEST_P(Invariant, Holds) {
  const auto& entry = GetParam();
  const auto& report = report_for(suite_of(entry.check_id));
  const auto* check = report.find(entry.check_id);
  ASSERT_NE(check, nullptr) << entry.check_id << " missing from its suite";
  EXPECT_GT(check->trials, 0u);
  EXPECT_TRUE(check->passed) << entry.invariant << ": " << check->detail;
}

INSTANTIATE_TEST_SUITE_P(Suites, Invariant, ::testing::ValuesIn(ni::kCoverageManifest),
                         [](const ::testing::TestParamInfo<ni::CoverageEntry>& info) {
                           std::string name(info.param.check_id);
                           for (auto& c : name) {
                             if (c == '.') c = '_';
                           }
                           return name;
                         });

}  // namespace

TEST(Coverage, ManifestMatchesSuites) {
  // Cheap run: every check in "all" appears in the manifest and vice versa.
  ni::SuiteOptions o;
  o.samples = 1;
  const auto all = ni::run_property_suite("all", ni::RngSpec{kSeed}, o);
  ASSERT_EQ(all.checks.size(), ni::kCoverageManifest.size());
  for (std::size_t i = 0; i < all.checks.size(); ++i) {
    EXPECT_EQ(all.checks[i].id, ni::kCoverageManifest[i].check_id);
  }
}

TEST(Coverage, UnknownSuiteIsRejected) {
  EXPECT_THROW(ni::run_property_suite("nope", ni::RngSpec{1}), ni::Error);
}
