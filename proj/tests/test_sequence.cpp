#include "djnmr/angle.hpp"
#include "djnmr/functions.hpp"
#include "djnmr/sequence.hpp"

#include <gtest/gtest.h>

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

using namespace djnmr;

namespace {

constexpr double kPi = std::numbers::pi;

BinaryFunction fn(int hex) { return BinaryFunction::from_hex(hex); }

int type_count(FunctionType t) {
  const auto& table = table_one();
  return static_cast<int>(std::count_if(table.begin(), table.end(), [t](const auto& kv) { return kv.second.type == t; }));
}

}  // namespace

// ---- PiFraction ------------------------------------------------------------

TEST(PiFraction, ReducesAndFormats) {
  EXPECT_EQ(PiFraction(2, 4), PiFraction(1, 2));
  EXPECT_EQ(PiFraction(3, -6), PiFraction(-1, 2));
  EXPECT_EQ(PiFraction(1).to_string(), "pi");
  EXPECT_EQ(PiFraction(-1, 2).to_string(), "-pi/2");
  EXPECT_EQ(PiFraction(3, 4).to_string(), "3pi/4");
  EXPECT_EQ(PiFraction(0).to_string(), "0");
  EXPECT_EQ(PiFraction(-1, 2).ratio_string(), "-1/2");
  EXPECT_EQ(PiFraction(1).ratio_string(), "1");
  EXPECT_THROW(PiFraction(1, 0), std::invalid_argument);
}

TEST(PiFraction, CanonicalRange) {
  EXPECT_EQ(PiFraction(3, 2).canonical(), PiFraction(-1, 2));
  EXPECT_EQ(PiFraction(-1).canonical(), PiFraction(1));
  EXPECT_EQ(PiFraction(2).canonical(), PiFraction(0));
  EXPECT_EQ(PiFraction(-7, 2).canonical(), PiFraction(1, 2));
  for (int n = -40; n <= 40; ++n) {
    const PiFraction c = PiFraction(n, 4).canonical();
    EXPECT_GT(c.over_pi(), -1.0);
    EXPECT_LE(c.over_pi(), 1.0);
    const PiFraction diff = PiFraction(n, 4) - c;
    EXPECT_EQ(diff.den(), 1);
    EXPECT_EQ(diff.num() % 2, 0);
  }
}

TEST(PiFraction, Parse) {
  EXPECT_EQ(parse_pi_fraction("1/2"), PiFraction(1, 2));
  EXPECT_EQ(parse_pi_fraction("-0.5"), PiFraction(-1, 2));
  EXPECT_EQ(parse_pi_fraction("1.5"), PiFraction(3, 2));
  EXPECT_EQ(parse_pi_fraction("pi/2"), PiFraction(1, 2));
  EXPECT_EQ(parse_pi_fraction("-pi"), PiFraction(-1));
  EXPECT_EQ(parse_pi_fraction("3pi/4"), PiFraction(3, 4));
  EXPECT_EQ(parse_pi_fraction("1"), PiFraction(1));
  EXPECT_EQ(parse_pi_fraction("0.125"), PiFraction(1, 8));
  for (const char* bad : {"", "abc", "1/0", "pi/", "1/2/3", "--1", "1.5.2"}) {
    EXPECT_THROW(parse_pi_fraction(bad), std::invalid_argument) << bad;
  }
}

TEST(PiFraction, Arithmetic) {
  EXPECT_EQ(PiFraction(1, 2) + PiFraction(1, 3), PiFraction(5, 6));
  EXPECT_EQ(PiFraction(1, 2) - PiFraction(1), PiFraction(-1, 2));
  EXPECT_EQ(-PiFraction(1, 4), PiFraction(-1, 4));
  EXPECT_TRUE(PiFraction(-1, 2) < PiFraction(1, 4));
  EXPECT_DOUBLE_EQ(PiFraction(1, 2).radians(), kPi / 2);
}

// ---- Generator / OperatorSequence -------------------------------------------

TEST(Generator, ConstructionRules) {
  const Generator g = Generator::coupling(3, 1, PiFraction(3, 2));
  EXPECT_EQ(g.spin(), 1);
  EXPECT_EQ(g.partner(), 3);
  EXPECT_EQ(g.angle(), PiFraction(-1, 2));
  EXPECT_EQ(g.to_string(), "J13(-pi/2)");
  EXPECT_EQ(Generator::z(2, PiFraction(1)).to_string(), "Sz(pi)");
  EXPECT_THROW(Generator::z(1, PiFraction(2)), std::invalid_argument);
  EXPECT_THROW(Generator::z(0, PiFraction(1)), std::out_of_range);
  EXPECT_THROW(Generator::coupling(2, 2, PiFraction(1)), std::invalid_argument);
}

TEST(Sequence, EmptyIsIdentity) {
  const OperatorSequence empty;
  EXPECT_EQ(empty.to_text(), "identity");
  EXPECT_EQ(max_abs_diff(sequence_to_unitary(empty), ComplexOperator::identity(8)), 0.0);
}

TEST(Sequence, ZeroAnglesDropped) {
  OperatorSequence s;
  s.add_z(1, PiFraction(0)).add_coupling(1, 2, PiFraction(2)).add_z(2, PiFraction(1));
  EXPECT_EQ(s.size(), 1u);
}

TEST(Sequence, SingleZRotationIsF0F) {
  const auto s = parse_sequence("Iz(pi)");
  EXPECT_TRUE(equal_up_to_global_phase(sequence_to_unitary(s), u_f(fn(0x0F)), 1e-10).equal);
}

TEST(Sequence, F4DPhasesByDirectAccumulation) {
  const auto s = parse_sequence("Sz(pi) J12(pi/2) J23(pi/2) J13(pi/2)");
  const auto u = sequence_to_unitary(s);
  // Phase of each basis state from the eigenvalues m_i = +-1/2.
  const Complex ref = u(0, 0);
  for (int x = 0; x < 8; ++x) {
    const double m1 = spin_bit(x, 1, 3) ? -0.5 : 0.5;
    const double m2 = spin_bit(x, 2, 3) ? -0.5 : 0.5;
    const double m3 = spin_bit(x, 3, 3) ? -0.5 : 0.5;
    const double phase = -(kPi * m2 + kPi / 2 * 2 * (m1 * m2 + m2 * m3 + m1 * m3));
    EXPECT_LE(std::abs(u(x, x) - std::polar(1.0, phase)), 1e-14);
    const double rel = fn(0x4D)(x) ? -1.0 : 1.0;
    EXPECT_LE(std::abs(u(x, x) / ref - rel), 1e-12) << x;
  }
}

TEST(Sequence, TextRoundTrip) {
  for (const auto& [hex, entry] : table_one()) {
    EXPECT_EQ(parse_sequence(entry.sequence.to_text()).generators(), entry.sequence.generators());
  }
  EXPECT_TRUE(parse_sequence("identity").empty());
  EXPECT_THROW(parse_sequence("Xz(pi)"), std::invalid_argument);
  EXPECT_THROW(parse_sequence("J14(pi)"), std::invalid_argument);
  EXPECT_THROW(parse_sequence("Iz(pi"), std::invalid_argument);
}

TEST(Sequence, JsonRoundTrip) {
  const auto& seq = table_one().at(0x56).sequence;
  const auto j = nlohmann::json::parse(seq.to_json());
  EXPECT_EQ(j["generators"][0]["kind"], "zrot");
  EXPECT_EQ(j["generators"][3]["kind"], "coupling");
  EXPECT_EQ(j["generators"][3]["pair"], "12");
  EXPECT_EQ(j["generators"][1]["angle_over_pi"], "-1/2");
  EXPECT_EQ(sequence_from_json(seq.to_json()).generators(), seq.generators());
  EXPECT_THROW(sequence_from_json("{\"generators\":[{\"kind\":\"warp\"}]}"), std::invalid_argument);
}

TEST(Sequence, PermutationInvariance) {
  std::mt19937 rng(11);
  for (const auto& [hex, entry] : table_one()) {
    auto gens = entry.sequence.generators();
    const auto u = sequence_to_unitary(entry.sequence);
    for (int k = 0; k < 5; ++k) {
      std::shuffle(gens.begin(), gens.end(), rng);
      EXPECT_LE(max_abs_diff(sequence_to_unitary(OperatorSequence(gens)), u), 1e-12);
    }
  }
}

// ---- Table ---------------------------------------------------------------

TEST(TableOne, SizeTypesAndLabels) {
  const auto& table = table_one();
  ASSERT_EQ(table.size(), 35u);
  EXPECT_EQ(type_count(FunctionType::I), 7);
  EXPECT_EQ(type_count(FunctionType::II), 12);
  EXPECT_EQ(type_count(FunctionType::III), 12);
  EXPECT_EQ(type_count(FunctionType::IV), 4);
  for (const auto& [hex, entry] : table) {
    EXPECT_EQ(entry.hex_index, hex);
    EXPECT_EQ(classify(fn(hex)), FunctionClass::Balanced);
    EXPECT_EQ(fn(hex)(0), 0);
    EXPECT_EQ(classify_type(entry.sequence), entry.type);
  }
}

TEST(TableOne, Examples) {
  EXPECT_EQ(table_one().at(0x69).sequence.to_text(), "Iz(pi) Sz(pi) Rz(pi)");
  EXPECT_EQ(table_one().at(0x56).sequence.to_text(), "Rz(pi) Iz(-pi/2) Sz(-pi/2) J12(pi/2)");
  EXPECT_EQ(classify_type(table_one().at(0x0F).sequence), FunctionType::I);
  EXPECT_EQ(classify_type(table_one().at(0x47).sequence), FunctionType::III);
  EXPECT_EQ(classify_type(table_one().at(0x17).sequence), FunctionType::IV);
}

TEST(TableOne, ChecksumIsFrozen) {
  EXPECT_EQ(table_checksum(table_one()), 0x3c17b34850f0fea9ULL);
}

TEST(TableOne, AllEntriesVerify) {
  const TableReport report = verify_table();
  EXPECT_EQ(report.passed(), 35);
  EXPECT_TRUE(report.all_passed());
  for (const auto& e : report.entries) EXPECT_LE(e.max_deviation, 1e-10);
}

TEST(TableOne, F36PhaseMatchesProduct) {
  const auto report = verify_table();
  const auto it = std::find_if(report.entries.begin(), report.entries.end(),
                               [](const TableCheck& c) { return c.hex_index == 0x36; });
  ASSERT_NE(it, report.entries.end());
  const auto product = sequence_to_unitary(parse_sequence("Sz(pi) Iz(-pi/2) Rz(-pi/2) J13(pi/2)"));
  const auto m = equal_up_to_global_phase(product, u_f(fn(0x36)), 1e-10);
  ASSERT_TRUE(m.equal);
  EXPECT_NEAR(it->phase, m.phase, 1e-12);
  EXPECT_LE(max_abs_diff(product, std::polar(1.0, it->phase) * u_f(fn(0x36))), 1e-12);
}

TEST(TableOne, CorruptedEntryFails) {
  auto table = table_one();
  OperatorSequence seq;
  for (const auto& g : table.at(0x36).sequence.generators()) {
    if (g.is_coupling()) {
      seq.add_coupling(g.spin(), g.partner(), -g.angle());
    } else {
      seq.add_z(g.spin(), g.angle());
    }
  }
  table.at(0x36).sequence = seq;
  const auto report = verify_table(table);
  EXPECT_EQ(report.passed(), 34);
  for (const auto& e : report.entries) EXPECT_EQ(e.passed, e.hex_index != 0x36);
}

// Rows as listed before the four transcription fixes.
TEST(TableOne, AsPrintedDefectiveRowsFail) {
  EXPECT_FALSE(verify_entry(0x3B, parse_sequence("Iz(pi) Sz(-pi/2) Rz(pi/2) J23(pi/2)")).passed);
  EXPECT_FALSE(verify_entry(0x13, parse_sequence("Iz(pi/2) Sz(pi/2) J23(-pi/2) J13(pi/2)")).passed);
  EXPECT_FALSE(verify_entry(0x1B, parse_sequence("Sz(pi) J12(pi/2) J23(-pi/2) J13(pi/2)")).passed);
  EXPECT_FALSE(verify_entry(0x4E, parse_sequence("Iz(pi) Sz(-pi/2) J23(pi/2) J13(pi/2)")).passed);
  // 0x3B and 0x13 are not even balanced.
  EXPECT_EQ(classify(fn(0x3B)), FunctionClass::Neither);
  EXPECT_EQ(classify(fn(0x13)), FunctionClass::Neither);
}

TEST(TableOne, LookupCoversEveryBalancedFunction) {
  for (auto f : enumerate_balanced()) {
    const auto entry = find_table_entry(f);
    ASSERT_TRUE(entry.has_value()) << f.hex_string();
    EXPECT_TRUE(equal_up_to_global_phase(sequence_to_unitary(entry->sequence), u_f(f), 1e-10).equal);
  }
  EXPECT_FALSE(find_table_entry(fn(0x00)).has_value());
  EXPECT_FALSE(find_table_entry(fn(0x01)).has_value());
}

// ---- Walsh ---------------------------------------------------------------

TEST(Walsh, Examples) {
  const auto zero = walsh(fn(0x00));
  for (int m = 0; m < 8; ++m) EXPECT_EQ(zero.units(m), 0);
  const auto w0f = walsh(fn(0x0F));
  EXPECT_DOUBLE_EQ(w0f.c0(), kPi / 2);
  EXPECT_DOUBLE_EQ(w0f.c(1), -kPi / 2);
  for (unsigned m : {2u, 3u, 4u, 5u, 6u, 7u}) EXPECT_EQ(w0f.units(m), 0);
  EXPECT_DOUBLE_EQ(walsh(fn(0x4D)).c123(), -kPi / 4);
}

TEST(Walsh, ExactReconstructionForAllFunctions) {
  for (int i = 0; i < 256; ++i) {
    const auto f = fn(i);
    const auto w = walsh(f);
    for (int x = 0; x < 8; ++x) EXPECT_EQ(w.reconstruct_eighths(x), 8 * f(x)) << i << " " << x;
  }
}

TEST(Walsh, ThreeBodyParityMatchesCouplingParity) {
  for (const auto& [hex, entry] : table_one()) {
    const int u = walsh(fn(hex)).units(7);
    const bool odd_quarter = ((u % 4) + 4) % 4 == 2;
    EXPECT_EQ(odd_quarter, entry.sequence.distinct_couplings() % 2 == 1) << std::hex << int(hex);
  }
}

// ---- Synthesis -------------------------------------------------------------

TEST(Synthesize, Examples) {
  EXPECT_EQ(synthesize(fn(0x0F)).to_text(), "Iz(pi)");
  const auto s69 = synthesize(fn(0x69));
  EXPECT_EQ(s69.size(), 3u);
  EXPECT_EQ(s69.coupling_count(), 0);
  for (const auto& g : s69.generators()) EXPECT_EQ(g.angle(), PiFraction(1));
  const auto s17 = synthesize(fn(0x17));
  EXPECT_EQ(s17.size(), 4u);
  EXPECT_EQ(s17.distinct_couplings(), 3);
}

TEST(Synthesize, RejectsNonBalanced) {
  EXPECT_THROW(synthesize(fn(0x00)), std::invalid_argument);
  EXPECT_THROW(synthesize(fn(0x01)), std::invalid_argument);
}

TEST(Synthesize, ClosureOverAllBalanced) {
  for (auto f : enumerate_balanced()) {
    const auto seq = synthesize(f);
    EXPECT_TRUE(equal_up_to_global_phase(sequence_to_unitary(seq), u_f(f), 1e-10).equal) << f.hex_string();
    const auto entry = find_table_entry(f);
    ASSERT_TRUE(entry.has_value());
    EXPECT_EQ(seq.coupling_count(), entry->sequence.coupling_count()) << f.hex_string();
    EXPECT_LE(seq.size(), entry->sequence.size()) << f.hex_string();
    EXPECT_EQ(classify_type(seq), entry->type);
    for (const auto& g : seq.generators()) {
      EXPECT_EQ(g.angle().den() <= 2, true);
    }
  }
}

TEST(Synthesize, Deterministic) {
  for (int h : {0x1E, 0x4D, 0x72}) EXPECT_EQ(synthesize(fn(h)), synthesize(fn(h)));
}

TEST(Sequence, GeneratorsOfTemporaryAreOwned) {
  std::vector<std::string> names;
  for (const auto& g : parse_sequence("Sz(pi) J12(pi/2) J13(-pi/2)").generators()) names.push_back(g.to_string());
  EXPECT_EQ(names, (std::vector<std::string>{"Sz(pi)", "J12(pi/2)", "J13(-pi/2)"}));
}
