#include <gtest/gtest.h>

#include "support.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace wkmodal;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<fs::path> corpus(const char* dir) {
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(fs::path(WKM_CORPUS) / "proofs" / dir)) out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

// The label recorded in the "# fails at: N" header.
std::size_t expected_failure(const std::string& text) {
  auto at = text.find("# fails at:");
  if (at == std::string::npos) throw std::runtime_error("missing fails-at header");
  return std::stoul(text.substr(at + 11));
}

bool schematic(const std::string& id) { return id != "FG-Be" && id != "Seg-PWKe"; }

// Every accepted line, with its premises, is a semantic consequence.
void expect_sound(const ProofScript& script, const ProofSystem& sys, const ProofReport& rep, std::size_t worlds) {
  for (const auto& line : rep.lines) {
    std::vector<Formula> gamma;
    for (auto i : line.depends_on) gamma.push_back(script.premises[i]);
    if (!sys.modal) {
      const MatrixLogic& l = sys.semantics == Semantics::bochvar ? bochvar_external : pwk_external;
      EXPECT_TRUE(matrix_consequence(gamma, line.formula, l)) << sys.id << " line " << line.label;
    } else {
      DecideOptions o;
      o.max_worlds = worlds;
      o.frame_class = sys::frame_class_of(sys);
      EXPECT_NE(decide(gamma, line.formula, sys.semantics, o).verdict, Verdict::invalid)
          << sys.id << " line " << line.label << ": " << to_string(line.formula);
    }
  }
}

ProofScript substituted(ProofScript s, const Substitution& sub) {
  for (auto& p : s.premises) p = substitute(p, sub);
  for (auto& st : s.steps) {
    st.formula = substitute(st.formula, sub);
    for (auto& [k, v] : st.just.bindings) v = substitute(v, sub);
  }
  return s;
}

}  // namespace

TEST(Match, Examples) {
  ProofSystem be = make_system("Be");
  auto rho = be.axioms_named("rho-B11");
  ASSERT_EQ(rho.size(), 1u);
  auto b = match_schema(parse("J2 q | ~J2 q <-> 1"), *rho[0]);
  ASSERT_TRUE(b.has_value());
  EXPECT_EQ(b->size(), 1u);
  EXPECT_EQ(b->at("?phi"), parse("q"));

  ProofSystem fg = make_system("FG-Be");
  auto a19 = fg.axioms_named("A19");
  ASSERT_EQ(a19.size(), 1u);
  EXPECT_FALSE(match_schema(parse("p -> (q -> p)"), *a19[0]).has_value());
  EXPECT_TRUE(match_schema(parse("J2 p -> (J0 q -> J2 p)"), *a19[0]).has_value());

  Formula f = parse("[](J2 p -> q) | J1 r");
  auto id = match_schema(f, AxiomSchema("id", parse("?x")));
  ASSERT_TRUE(id.has_value());
  EXPECT_EQ(id->at("?x"), expand_sugar(f));
}

TEST(Match, SugarIsExpandedBeforeMatching) {
  ProofSystem bbox = make_system("Bbox");
  auto b3 = bbox.axioms_named("B3");
  EXPECT_TRUE(match_schema(parse("J2 []p -> []J2 p"), *b3[0]).has_value());
  EXPECT_TRUE(match_schema(parse("~J2 []p | []J2 p"), *b3[0]).has_value());
  EXPECT_FALSE(match_schema(parse("J2 []p -> []J2 q"), *b3[0]).has_value());
}

TEST(Systems, Catalogue) {
  auto ids = list_systems();
  for (const char* id : {"Be", "PWKe", "FG-Be", "Seg-PWKe", "Bbox", "MPWK", "Bbox+S4e", "MPWK+S5"})
    EXPECT_NE(std::find(ids.begin(), ids.end(), id), ids.end()) << id;
  for (const auto& id : ids) EXPECT_EQ(make_system(id).id, id);

  ProofSystem te = make_system("Bbox+Te");
  ProofSystem base = make_system("Bbox");
  EXPECT_EQ(te.axioms.size(), base.axioms.size() + 1);
  EXPECT_EQ(te.axioms.back().name, "Te");
  EXPECT_EQ(te.axioms.back().pattern, parse("[]J2 ?phi -> J2 ?phi"));

  ProofSystem s5 = make_system("MPWK+S5");
  EXPECT_EQ(s5.axioms.size(), make_system("MPWK").axioms.size() + 2);
  EXPECT_FALSE(s5.axioms_named("T").empty());
  EXPECT_FALSE(s5.axioms_named("5").empty());
  EXPECT_TRUE(s5.axioms_named("4").empty());

  EXPECT_THROW(make_system("K"), Error);
  EXPECT_THROW(make_system("Bbox+T"), Error);
  EXPECT_THROW(make_system("MPWK+Te"), Error);
}

TEST(Systems, IndexFamiliesAreExpanded) {
  ProofSystem fg = make_system("FG-Be");
  EXPECT_GT(fg.axioms_named("A12").size(), 1u);
  EXPECT_GT(fg.axioms_named("A13").size(), 1u);
  for (const auto& ax : fg.axioms) EXPECT_FALSE(ax.pattern.name().empty() && ax.name.empty());
}

TEST(Corpus, AcceptedScriptsAreAccepted) {
  auto files = corpus("accepted");
  EXPECT_GE(files.size(), 10u);
  for (const auto& f : files) {
    ProofScript s = parse_proof_script(slurp(f));
    ProofReport r = check_proof(s);
    EXPECT_TRUE(r.accepted) << f.filename() << ": line " << r.failing_label.value_or(0) << ": " << r.reason;
    EXPECT_EQ(r.lines.size(), s.steps.size()) << f.filename();
  }
}

TEST(Corpus, RejectedScriptsFailAtTheAnnotatedLine) {
  auto files = corpus("rejected");
  EXPECT_GE(files.size(), 10u);
  for (const auto& f : files) {
    std::string text = slurp(f);
    CheckOptions o;
    o.strict = f.filename().string().starts_with("strict_");
    ProofReport r = check_proof(parse_proof_script(text), o);
    EXPECT_FALSE(r.accepted) << f.filename();
    EXPECT_EQ(r.failing_label, expected_failure(text)) << f.filename() << ": " << r.reason;
    EXPECT_FALSE(r.reason.empty());
  }
}

TEST(Corpus, StrictRejectionsAreAcceptedOtherwise) {
  for (const auto& f : corpus("rejected")) {
    if (!f.filename().string().starts_with("strict_")) continue;
    EXPECT_TRUE(check_proof(parse_proof_script(slurp(f))).accepted) << f.filename();
  }
}

TEST(Corpus, SpecificReasons) {
  auto reason = [](const char* name) {
    return check_proof(parse_proof_script(slurp(fs::path(WKM_CORPUS) / "proofs" / "rejected" / name))).reason;
  };
  EXPECT_NE(reason("n_on_premise.txt").find("N"), std::string::npos);
  EXPECT_NE(reason("mpwk_nonexternal_mp.txt").find("external"), std::string::npos);
  EXPECT_NE(reason("dangling_reference.txt").find("7"), std::string::npos);
}

TEST(Soundness, CorpusTheoremsHoldSemantically) {
  for (const auto& f : corpus("accepted")) {
    ProofScript s = parse_proof_script(slurp(f));
    ProofSystem sys = make_system(*s.system);
    ProofReport r = check_proof(s, sys);
    ASSERT_TRUE(r.accepted) << f.filename();
    expect_sound(s, sys, r, 3);
  }
}

TEST(Soundness, SubstitutionInstancesAreAcceptedAndSound) {
  std::mt19937_64 rng(43);
  for (const auto& f : corpus("accepted")) {
    ProofScript s = parse_proof_script(slurp(f));
    ProofSystem sys = make_system(*s.system);
    if (!schematic(sys.id)) continue;
    for (int round = 0; round < 6; ++round) {
      Substitution sub;
      for (const char* v : {"p", "q", "r"}) sub.emplace(v, gen::random_formula(rng, {"p", "q"}, sys.modal ? 1 : 0, 3));
      ProofScript t = substituted(s, sub);
      ProofReport r = check_proof(t, sys);
      ASSERT_TRUE(r.accepted) << f.filename() << " round " << round << ": line " << r.failing_label.value_or(0)
                              << ": " << r.reason;
      expect_sound(t, sys, r, 2);
    }
  }
}

TEST(Dependencies, PropagateThroughRules) {
  for (const auto& f : corpus("accepted")) {
    ProofScript s = parse_proof_script(slurp(f));
    ProofReport r = check_proof(s);
    ASSERT_TRUE(r.accepted);
    std::map<std::size_t, std::set<std::size_t>> deps;
    for (std::size_t i = 0; i < r.lines.size(); ++i) {
      const auto& line = r.lines[i];
      const auto& j = s.steps[i].just;
      std::set<std::size_t> want;
      if (j.kind == Justification::Kind::premise) {
        ASSERT_EQ(line.depends_on.size(), 1u) << f.filename();
        ASSERT_EQ(expand_sugar(s.premises[*line.depends_on.begin()]), expand_sugar(line.formula));
        want = line.depends_on;
      }
      for (auto ref : j.refs) want.insert(deps[ref].begin(), deps[ref].end());
      EXPECT_EQ(line.depends_on, want) << f.filename() << " line " << line.label;
      deps[line.label] = line.depends_on;
    }
  }
}

TEST(Dependencies, UnusedPremisesChangeNothing) {
  for (const auto& f : corpus("accepted")) {
    ProofScript s = parse_proof_script(slurp(f));
    ProofReport before = check_proof(s);
    s.premises.push_back(parse("J2 r | q"));
    ProofReport after = check_proof(s);
    ASSERT_TRUE(after.accepted) << f.filename();
    for (std::size_t i = 0; i < before.lines.size(); ++i) EXPECT_EQ(before.lines[i].depends_on, after.lines[i].depends_on);
  }
}

TEST(Checker, StrictModeDisablesDerivedRules) {
  CheckOptions strict;
  strict.strict = true;
  ProofScript taut = parse_proof_script("system: Be\n1. J2 p | ~J2 p ; taut\n");
  EXPECT_TRUE(check_proof(taut).accepted);
  EXPECT_FALSE(check_proof(taut, strict).accepted);
  ProofScript rho = parse_proof_script("system: Be\n1. J2 p | ~J2 p <-> 1 ; ax rho-B11\n");
  EXPECT_TRUE(check_proof(rho, strict).accepted);
}

TEST(Checker, NecessitationOnTheorems) {
  ProofScript ok = parse_proof_script("system: Bbox\n1. J2 p | ~J2 p ; taut\n2. [](J2 p | ~J2 p) ; rule N 1\n");
  EXPECT_TRUE(check_proof(ok).accepted);
  ProofScript bad =
      parse_proof_script("system: Bbox\npremise: J2 p\n1. J2 p ; premise\n2. []J2 p ; rule N 1\n");
  ProofReport r = check_proof(bad);
  EXPECT_FALSE(r.accepted);
  EXPECT_EQ(r.failing_label, 2u);
}

TEST(Checker, ExternalMpInPwke) {
  ProofScript ok = parse_proof_script(
      "system: PWKe\npremise: J2 p\npremise: J2 p -> J0 q\n1. J2 p ; premise\n2. J2 p -> J0 q ; premise\n"
      "3. J0 q ; rule MP 1 2\n");
  EXPECT_TRUE(check_proof(ok).accepted);
  ProofScript bad = parse_proof_script(
      "system: PWKe\npremise: p\npremise: p -> q\n1. p ; premise\n2. p -> q ; premise\n3. q ; rule MP 1 2\n");
  EXPECT_FALSE(check_proof(bad).accepted);
  // The same script is fine in Be, where MP holds unrestricted.
  bad.system = "Be";
  EXPECT_TRUE(check_proof(bad).accepted);
}

TEST(Checker, UndeclaredPremise) {
  ProofScript s = parse_proof_script("system: Be\n1. p ; premise\n");
  ProofReport r = check_proof(s);
  EXPECT_FALSE(r.accepted);
  EXPECT_EQ(r.failing_label, 1u);
}

TEST(Parse, Errors) {
  EXPECT_THROW(parse_proof_script("system: Be\n1 p ; premise\n"), FormatError);
  EXPECT_THROW(parse_proof_script("system: Be\n1. p premise\n"), FormatError);
  EXPECT_THROW(parse_proof_script("system: Be\n1. p ; ax\n"), FormatError);
  EXPECT_THROW(parse_proof_script("system: Be\n1. p ; frobnicate\n"), FormatError);
  EXPECT_THROW(parse_proof_script("system: Be\n1. p -> ; taut\n"), FormatError);
  EXPECT_THROW(parse_proof_script("system: Be\n1. p ; rule MP x\n"), FormatError);
  EXPECT_THROW(parse_proof_script("system: Be\n1. p ; taut\n1. p ; taut\n"), FormatError);
  EXPECT_THROW(check_proof(parse_proof_script("1. J2 p | ~J2 p ; taut\n")), Error);
  EXPECT_THROW(check_proof(parse_proof_script("system: K\n1. J2 p | ~J2 p ; taut\n")), Error);
}

TEST(Parse, CommentsAndGreekNames) {
  ProofScript s = parse_proof_script("# header\nsystem: Be\n\n1. J2 p | ~J2 p <-> 1 ; ax \xCF\x81-B11 # trailing\n");
  ASSERT_EQ(s.steps.size(), 1u);
  EXPECT_EQ(s.steps[0].just.name, "rho-B11");
  EXPECT_TRUE(check_proof(s).accepted);
}
