#include <catch_amalgamated.hpp>

#include <sstream>

#include "oracles.hpp"
#include "sst/io.hpp"
#include "sst/ridges.hpp"

using namespace sst;

namespace {

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  for (std::string l; std::getline(is, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST_CASE("signal CSV round trips exactly", "[io]") {
  const auto s = oracle::random_signal(21, 300, 44.1);
  std::stringstream ss;
  io::write_signal_csv(ss, s);
  const auto back = io::read_signal_csv(ss);
  REQUIRE(back.size() == s.size());
  CHECK(back.sample_rate() == s.sample_rate());
  CHECK(back.start_time() == s.start_time());
  for (std::size_t n = 0; n < s.size(); ++n) CHECK(back.samples()[n] == s.samples()[n]);
}

TEST_CASE("signal CSV with an offset start and integer rate", "[io]") {
  const SampledSignal s(std::vector<cplx>{1.0, {2.0, -1.0}, 3.0, 0.25}, 100.0, 2.5);
  std::stringstream ss;
  io::write_signal_csv(ss, s);
  const auto text = ss.str();
  CHECK(lines_of(text).front() == "time,real,imag");
  CHECK(lines_of(text).size() == 5);
  const auto back = io::read_signal_csv(ss);
  CHECK(back.sample_rate() == 100.0);
  CHECK(back.start_time() == 2.5);
}

TEST_CASE("a missing imag column reads as a real signal", "[io]") {
  std::istringstream is("time,real\n0,1\n0.5,2\n1,3\n");
  const auto s = io::read_signal_csv(is);
  REQUIRE(s.size() == 3);
  CHECK(s.sample_rate() == 2.0);
  CHECK(s.is_real());
  CHECK(s.samples()[2] == cplx{3.0, 0.0});
}

TEST_CASE("malformed signal CSVs are rejected with the cause", "[io][errors]") {
  auto fails_with = [](const std::string& text, const std::string& fragment) {
    std::istringstream is(text);
    try {
      io::read_signal_csv(is);
    } catch (const DataError& e) {
      INFO(e.what());
      CHECK(std::string(e.what()).find(fragment) != std::string::npos);
      return;
    }
    FAIL("no error for: " << text);
  };
  fails_with("", "header");
  fails_with("0,1,0\n1,2,0\n", "time");
  fails_with("time,imag\n0,1\n1,2\n", "real");
  fails_with("time,real,imag\n0,1,0\n0.1,1,0\n0.3,1,0\n0.4,1,0\n", "uniform");
  fails_with("time,real,imag\n0,1,0\n0.1,x,0\n", "real on line 3");
  fails_with("time,real,imag\n0,1\n", "fields");
  fails_with("time,real,imag\n0,1,0\n", "two samples");
  fails_with("time,real,imag\n1,1,0\n0,1,0\n", "increase");
}

TEST_CASE("plane CSV lays out one row per axis value", "[io]") {
  TimeFrequencyPlane p;
  p.freqs = {1.0, 2.0};
  p.times = {0.0, 0.5, 1.0};
  p.values = ComplexMatrix(2, 3);
  p.values(0, 1) = cplx{3.0, 4.0};
  p.values(1, 2) = -2.0;
  p.coi = MaskMatrix(2, 3, 0);
  std::ostringstream os;
  io::write_plane_csv(os, p);
  const auto l = lines_of(os.str());
  REQUIRE(l.size() == 3);
  CHECK(l[0] == "frequency,0,0.5,1");
  CHECK(l[1] == "1,0,5,0");
  CHECK(l[2] == "2,0,0,2");

  TimeScalePlane s;
  s.scales = {0.25};
  s.times = {0.0};
  s.values = ComplexMatrix(1, 1);
  s.coi = MaskMatrix(1, 1, 0);
  std::ostringstream os2;
  io::write_plane_csv(os2, s);
  CHECK(lines_of(os2.str())[0] == "scale,0");
}

TEST_CASE("PGM renders have the declared size and frequency increasing downward", "[io][pgm]") {
  TimeFrequencyPlane p;
  p.freqs = {1.0, 2.0, 3.0};
  p.times = {0.0, 1.0, 2.0, 3.0};
  p.values = ComplexMatrix(3, 4);
  for (std::size_t c = 0; c < 4; ++c) p.values(2, c) = 1.0;  // highest frequency bright
  p.coi = MaskMatrix(3, 4, 0);
  std::ostringstream os;
  io::write_pgm(os, p);
  const auto bytes = os.str();
  const std::string header = "P5\n4 3\n255\n";
  REQUIRE(bytes.substr(0, header.size()) == header);
  REQUIRE(bytes.size() == header.size() + 12);
  const auto* px = reinterpret_cast<const unsigned char*>(bytes.data() + header.size());
  for (int c = 0; c < 4; ++c) {
    CHECK(px[c] == 0);
    CHECK(px[4 + c] == 0);
    CHECK(px[8 + c] == 255);
  }

  // Scale planes: small scales are high frequencies, drawn last.
  TimeScalePlane s;
  s.scales = {0.1, 0.2};
  s.times = {0.0, 1.0};
  s.values = ComplexMatrix(2, 2);
  s.values(0, 0) = s.values(0, 1) = 1.0;
  s.coi = MaskMatrix(2, 2, 0);
  std::ostringstream os2;
  io::write_pgm(os2, s);
  const auto b2 = os2.str();
  const std::string h2 = "P5\n2 2\n255\n";
  REQUIRE(b2.size() == h2.size() + 4);
  CHECK(static_cast<unsigned char>(b2[h2.size()]) == 0);
  CHECK(static_cast<unsigned char>(b2[h2.size() + 2]) == 255);
}

TEST_CASE("PGM of a zero plane is uniformly black", "[io][pgm]") {
  TimeFrequencyPlane p;
  p.freqs = {1.0, 2.0};
  p.times = {0.0, 1.0};
  p.values = ComplexMatrix(2, 2);
  p.coi = MaskMatrix(2, 2, 1);
  std::ostringstream os;
  io::write_pgm(os, p);
  const auto bytes = os.str();
  CHECK(bytes.substr(bytes.size() - 4) == std::string(4, '\0'));
}

TEST_CASE("ridge CSV round trips through the reader", "[io]") {
  RidgeSet set;
  set.times = {0.0, 0.25, 0.5, 0.75};
  Ridge a;
  a.start = 1;
  a.bins = {3, 4};
  a.freqs = {5.0, 5.5};
  a.mags = {0.125, 1e-3};
  Ridge b;
  b.bins = {9, 9, 9, 9};
  b.freqs = {12.0, 12.0, 12.0, 12.0};
  b.mags = {1.0, 2.0, 3.0, 4.0};
  set.ridges = {a, b};
  std::stringstream ss;
  io::write_ridges_csv(ss, set);
  const auto rows = io::read_ridges_csv(ss);
  REQUIRE(rows.size() == 6);
  CHECK(rows[0].id == 0);
  CHECK(rows[0].time == 0.25);
  CHECK(rows[1].frequency == 5.5);
  CHECK(rows[1].magnitude == 1e-3);
  CHECK(rows[5].id == 1);
  CHECK(rows[5].time == 0.75);

  std::istringstream bad("id,t,f,m\n");
  CHECK_THROWS_AS(io::read_ridges_csv(bad), DataError);
  std::istringstream empty_set("ridge_id,time,frequency,magnitude\n");
  CHECK(io::read_ridges_csv(empty_set).empty());
}

TEST_CASE("density CSV has one row per time", "[io]") {
  const std::vector<double> t{0.0, 0.1}, d{5.0, 17.0};
  std::ostringstream os;
  io::write_density_csv(os, t, d);
  CHECK(os.str() == "time,density\n0,5\n0.1,17\n");
}

TEST_CASE("doubles format in shortest round-trip form", "[io]") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0}) {
    CHECK(io::parse_double(io::format_double(v), "v") == v);
  }
  CHECK(io::format_double(0.1) == "0.1");
  CHECK_THROWS_AS(io::parse_double("1.5abc", "v"), DataError);
}
