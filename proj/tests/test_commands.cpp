#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "hyperwave/commands.hpp"
#include "support/random.hpp"

using namespace hyperwave;

namespace {

class TempDir {
public:
  TempDir() {
    path_ = std::filesystem::temp_directory_path() /
            ("hyperwave_test_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
             "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  std::string file(const std::string &name) const { return (path_ / name).string(); }

private:
  std::filesystem::path path_;
};

void write_text(const std::string &path, const std::string &text) {
  std::ofstream(path, std::ios::binary) << text;
}

ErrorCode code_of(auto &&fn) {
  try {
    fn();
  } catch (const Error &e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::ParseError;
}

CommandOptions base() {
  CommandOptions o;
  o.seed = 5;
  return o;
}

} // namespace

TEST(Commands, ExitCodes) {
  EXPECT_EQ(exit_code_for(ErrorCode::IoError), ExitCode::io);
  EXPECT_EQ(exit_code_for(ErrorCode::ParseError), ExitCode::io);
  EXPECT_EQ(exit_code_for(ErrorCode::BasisMismatch), ExitCode::validation);
  EXPECT_EQ(exit_code_for(ErrorCode::UnsupportedDimension), ExitCode::validation);
}

TEST(Commands, LoadBasis) {
  EXPECT_EQ(load_basis("haar").name(), "haar");
  EXPECT_EQ(code_of([] { (void)load_basis("db4"); }), ErrorCode::UnknownKind);
  EXPECT_EQ(code_of([] { (void)load_basis("maskfile=/nonexistent/x.masks"); }), ErrorCode::IoError);
}

TEST(Commands, PGrid) {
  const auto g = parse_p_grid("0.6, 1,inf");
  ASSERT_EQ(g.size(), 3u);
  EXPECT_EQ(g[0], 0.6);
  EXPECT_TRUE(std::isinf(g[2]));
  EXPECT_TRUE(parse_p_grid("").empty());
}

TEST(Commands, TransformRoundTrip) {
  TempDir dir;
  for (const char *sys : {"hyper", "iso"}) {
    auto o = base();
    o.system = sys;
    o.kind = "point_kink";
    o.jmax = 5;
    std::ostringstream coeffs;
    cmd_transform(o, coeffs);
    write_text(dir.file("c.txt"), coeffs.str());
    auto inv = base();
    inv.direction = "inverse";
    inv.in = dir.file("c.txt");
    std::ostringstream arr;
    cmd_transform(inv, arr);
    std::istringstream is(arr.str());
    const auto back = read_array(is, load_basis("haar"));
    const auto want = detail::generate(o, load_basis("haar"), 5);
    EXPECT_LT(fixtures::max_abs_diff(back, want), 1e-12 * fixtures::max_abs(want)) << sys;
  }
}

TEST(Commands, TransformArrayInput) {
  TempDir dir;
  const auto spec = load_basis("haar");
  detail::Rng rng(3);
  const auto a = fixtures::random_array(rng, 3, 16);
  std::ostringstream os;
  write_array(os, spec, a);
  write_text(dir.file("a.txt"), os.str());
  auto o = base();
  o.in = dir.file("a.txt");
  std::ostringstream coeffs;
  cmd_transform(o, coeffs);
  std::istringstream is(coeffs.str());
  const auto c = read_coeffs(is);
  EXPECT_LT(fixtures::max_abs_diff(hyper_inverse(spec, c), a), 1e-12);
}

TEST(Commands, TransformErrors) {
  TempDir dir;
  write_text(dir.file("empty"), "");
  auto o = base();
  o.in = dir.file("empty");
  std::ostringstream sink;
  EXPECT_EQ(code_of([&] { cmd_transform(o, sink); }), ErrorCode::IoError);
  o.in = dir.file("missing");
  EXPECT_EQ(code_of([&] { cmd_transform(o, sink); }), ErrorCode::IoError);
  auto iso3 = base();
  iso3.system = "iso";
  iso3.n = 3;
  iso3.kind = "smooth";
  EXPECT_EQ(code_of([&] { cmd_transform(iso3, sink); }), ErrorCode::UnsupportedDimension);
  auto dir_bad = base();
  dir_bad.direction = "sideways";
  dir_bad.kind = "smooth";
  EXPECT_EQ(code_of([&] { cmd_transform(dir_bad, sink); }), ErrorCode::UnknownKind);
}

TEST(Commands, NTermMismatchedBasis) {
  TempDir dir;
  write_text(dir.file("c.txt"), "hyperwave-coeffs v1 hyper n=1 p=2 basis=dku13 jmax=3\n0 0 1\n");
  auto o = base();
  o.in = dir.file("c.txt");
  std::ostringstream sink;
  EXPECT_EQ(code_of([&] { (void)cmd_nterm(o, sink); }), ErrorCode::BasisMismatch);
}

TEST(Commands, NTermPowerLawRate) {
  // Sorted weights with E_N^2 = N^{-1} exactly for 1 <= N <= 2047: w_1 = 1,
  // w_i^2 = 1/(i(i-1)) and the remaining mass 1/2047 split evenly over the
  // other 2049 indices of the level-12 truncation.
  TempDir dir;
  const auto spec = load_basis("haar");
  NdArray layout(1, spec.delta_size(12));
  auto u = hyper_from_layout(spec, layout);
  ASSERT_EQ(u.entries.size(), 4096u);
  for (std::size_t i = 0; i < u.entries.size(); ++i) {
    const double k = static_cast<double>(i + 1);
    u.entries[i].second =
        i == 0 ? 1.0 : (i < 2047 ? std::sqrt(1.0 / (k * (k - 1))) : std::sqrt(1.0 / (2047.0 * 2049.0)));
  }
  std::ostringstream os;
  write_coeffs(os, u);
  write_text(dir.file("pl.txt"), os.str());
  auto o = base();
  o.in = dir.file("pl.txt");
  o.nmin = 16;
  o.nmax = 1024;
  std::ostringstream csv;
  const auto sum = cmd_nterm(o, csv);
  EXPECT_NEAR(sum.rate, 0.5, 1e-10);
  EXPECT_EQ(csv.str().substr(0, 27), "N,E_N,q,r,tau,basis,n,seed\n");
}

TEST(Commands, NTermRandomDecayRate) {
  auto o = base();
  o.kind = "random_decay";
  o.q = 0.0;
  o.r = 1.0;
  std::ostringstream csv;
  const auto sum = cmd_nterm(o, csv);
  EXPECT_GE(sum.rate, 0.85);
  EXPECT_LE(sum.rate, 1.15);
}

TEST(Commands, VerifySuites) {
  auto o = base();
  o.suite = "biorth";
  std::ostringstream biorth;
  EXPECT_TRUE(cmd_verify(o, biorth));
  o.suite = "kron";
  std::ostringstream kron;
  EXPECT_TRUE(cmd_verify(o, kron));
  EXPECT_NE(kron.str().find("kron,p=1,4,"), std::string::npos);
  o.suite = "lemma4";
  o.p = "0.6";
  o.jmax = 10;
  std::ostringstream l4;
  EXPECT_TRUE(cmd_verify(o, l4));
  o.suite = "nope";
  std::ostringstream sink;
  EXPECT_EQ(code_of([&] { (void)cmd_verify(o, sink); }), ErrorCode::UnknownKind);
}

TEST(Commands, CompareSmoothCurvesDecrease) {
  auto o = base();
  o.kind = "smooth";
  o.jmax = 7;
  o.nmax = 1024;
  std::ostringstream csv;
  const auto sum = cmd_compare(o, csv);
  EXPECT_GT(sum.rate_iso, 0.0);
  EXPECT_GT(sum.rate_hyper, 0.0);
  std::istringstream is(csv.str());
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "N,E_N_iso,E_N_hyper,q,kind,basis,n,seed");
  double prev_iso = detail::kInf, prev_hyper = detail::kInf;
  while (std::getline(is, line)) {
    std::istringstream ls(line);
    std::string n, ei, eh;
    std::getline(ls, n, ',');
    std::getline(ls, ei, ',');
    std::getline(ls, eh, ',');
    EXPECT_LT(std::stod(ei), prev_iso);
    EXPECT_LT(std::stod(eh), prev_hyper);
    prev_iso = std::stod(ei);
    prev_hyper = std::stod(eh);
  }
}

TEST(Commands, CompareNeedsKindAndTwoDimensions) {
  std::ostringstream sink;
  auto o = base();
  EXPECT_EQ(code_of([&] { (void)cmd_compare(o, sink); }), ErrorCode::UnknownKind);
  o.kind = "smooth";
  o.n = 3;
  EXPECT_EQ(code_of([&] { (void)cmd_compare(o, sink); }), ErrorCode::UnsupportedDimension);
}

TEST(Commands, Deterministic) {
  auto o = base();
  o.kind = "random_decay";
  o.jmax = 7;
  o.nmax = 1024;
  std::ostringstream a, b;
  (void)cmd_compare(o, a);
  (void)cmd_compare(o, b);
  EXPECT_EQ(a.str(), b.str());
  o.suite = "equivalence";
  o.jmax = 5;
  std::ostringstream c, d;
  (void)cmd_verify(o, c);
  (void)cmd_verify(o, d);
  EXPECT_EQ(c.str(), d.str());
}
