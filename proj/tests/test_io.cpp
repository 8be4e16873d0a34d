#include <catch2/catch.hpp>

#include "support/fixtures.hpp"

using namespace kslat;
using namespace std::complex_literals;
using kslat::testing::Rng;

namespace {

const std::filesystem::path data_dir = KSLAT_DATA_DIR;

auto kind_is(ErrorKind k) {
  return Catch::Predicate<Error>([k](const Error& e) { return e.kind() == k; }, std::string(to_string(k)));
}

Json z_doc() {
  return Json::parse(R"({"dim": 2, "contexts": {"z": [[[1, 0], [0, 0]], [[0, 0], [0, 1]]]}})");
}

// Collections agree when contexts, member matrices and registry identities match.
void check_same_collection(const ContextCollection& a, const ContextCollection& b) {
  REQUIRE(a.contexts().size() == b.contexts().size());
  CHECK(a.ambient_dim() == b.ambient_dim());
  CHECK(a.identity_count() == b.identity_count());
  for (std::size_t k = 0; k < a.contexts().size(); ++k) {
    const auto& ca = a.contexts()[k];
    const auto& cb = b.contexts()[k];
    CHECK(ca.id() == cb.id());
    REQUIRE(ca.size() == cb.size());
    for (std::size_t m = 0; m < ca.size(); ++m) {
      CHECK(ca.members()[m].matrix() == cb.members()[m].matrix());
      CHECK(a.identity_of(k, m) == b.identity_of(k, m));
    }
  }
}

}  // namespace

TEST_CASE("ingest the matrix form", "[io]") {
  const auto c = ingest(data_dir / "pauli.json");
  REQUIRE(c.contexts().size() == 3);
  const auto ref = pauli_contexts();
  for (std::size_t k = 0; k < 3; ++k) {
    CHECK(c.contexts()[k].id() == ref.contexts()[k].id());
    for (std::size_t m = 0; m < 2; ++m) {
      CHECK(max_abs(c.contexts()[k].members()[m].matrix() - ref.contexts()[k].members()[m].matrix()) < 1e-15);
    }
  }
  CHECK(c.contexts()[1].members()[0].label() == "x.1");
  CHECK(c.identity_count() == 6);
}

TEST_CASE("ingest the ray form", "[io]") {
  const auto c = ingest(data_dir / "pauli_rays.json");
  REQUIRE(c.contexts().size() == 3);
  const auto ref = pauli_contexts();
  for (std::size_t k = 0; k < 3; ++k) {
    for (std::size_t m = 0; m < 2; ++m) {
      CHECK(max_abs(c.contexts()[k].members()[m].matrix() - ref.contexts()[k].members()[m].matrix()) < 1e-15);
    }
  }
  CHECK(c.contexts()[2].members()[1].label() == "y2");

  // rays (1,0), (0,1) give exactly the matrix form of the z context
  const auto rays = parse_document(Json::parse(R"({"dim": 2, "rays": {"a": [1, 0], "b": [[0, 0], [3, 0]]},
                                                    "groups": {"z": ["a", "b"]}})"));
  const auto mats = parse_document(z_doc());
  check_same_collection(rays, mats);
}

TEST_CASE("shared rays share an identity", "[io]") {
  const auto c = ingest(data_dir / "cabello18.json");
  CHECK(c.contexts().size() == 9);
  CHECK(c.identity_count() == 18);
  const auto ref = kslat::testing::cabello18();
  check_same_collection(parse_document(emit(c)), c);
  for (std::size_t k = 0; k < 9; ++k) CHECK(c.identities_of_context(k) == ref.identities_of_context(k));
}

TEST_CASE("parse errors", "[io]") {
  const std::vector<std::string> bad = {
      R"([1, 2])",
      R"({"contexts": {}})",
      R"({"dim": 0, "contexts": {"z": []}})",
      R"({"dim": 2})",
      R"({"dim": 2, "contexts": {}})",
      R"({"dim": 2, "contexts": {"z": []}})",
      R"({"dim": 2, "contexts": {"z": [[[1, 0]]]}})",
      R"({"dim": 2, "contexts": {"z": [[[1, 0], [0, "a"]]]}})",
      R"({"dim": 2, "contexts": {"z": [[[1, 0], [0, [1, 2, 3]]]]}})",
      R"({"dim": 2, "rays": {"a": [1, 0]}})",
      R"({"dim": 2, "rays": {"a": [1, 0, 0]}, "groups": {"g": ["a"]}})",
      R"({"dim": 2, "rays": {"a": [1, 0]}, "groups": {"g": ["b"]}})",
      R"({"dim": 2, "rays": {"a": [1, 0]}, "groups": {"g": [1]}})",
      R"({"dim": 2, "rays": {"a": [1, 0]}, "groups": {"g": []}})",
      R"({"dim": 2, "rays": {"a": [1, 0]}, "groups": {"g": ["a"]}, "contexts": {}})",
      R"({"dim": 2, "contexts": {"z": [[[1, 0], [0, 1]]]}, "groups": {}})",
      R"({"dim": 2, "eps_rank": "small", "contexts": {"z": [[[1, 0], [0, 1]]]}})",
      R"({"dim": 2, "eps_rank": -1, "contexts": {"z": [[[1, 0], [0, 1]]]}})",
      R"({"dim": 2, "eps_entry": 0, "contexts": {"z": [[[1, 0], [0, 1]]]}})",
  };
  for (const auto& text : bad) {
    INFO(text);
    CHECK_THROWS_MATCHES(parse_document(Json::parse(text)), Error, kind_is(ErrorKind::ParseError));
  }
  CHECK_THROWS_MATCHES(ingest(data_dir / "does-not-exist.json"), Error, kind_is(ErrorKind::ParseError));
}

TEST_CASE("validation errors carry the axiom that failed", "[io]") {
  try {
    ingest(data_dir / "bad_context.json");
    FAIL("expected ValidationError");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ValidationError);
    REQUIRE(e.cause());
    CHECK(*e.cause() == ErrorKind::PairwiseProductNonzero);
    CHECK(std::string(e.what()).find("zx") != std::string::npos);
    REQUIRE(e.residual());
    CHECK(*e.residual() == Approx(0.5));
  }

  const std::vector<std::pair<std::string, ErrorKind>> cases = {
      {R"({"dim": 2, "contexts": {"h": [[[0.5, 0], [0, 0.5]], [[0.5, 0], [0, 0.5]]]}})", ErrorKind::NotIdempotent},
      {R"({"dim": 2, "contexts": {"h": [[[1, 0], [1, 0]], [[0, 0], [-1, 1]]]}})", ErrorKind::NotHermitian},
      {R"({"dim": 2, "contexts": {"h": [[[1, 0], [0, 0]]]}})", ErrorKind::SumNotIdentity},
      {R"({"dim": 2, "rays": {"a": [1, 0], "b": [1, 1]}, "groups": {"g": ["a", "b"]}})", ErrorKind::NotOrthonormal},
      {R"({"dim": 2, "rays": {"a": [1, 0]}, "groups": {"g": ["a"]}})", ErrorKind::NotComplete},
  };
  for (const auto& [text, cause] : cases) {
    INFO(text);
    try {
      parse_document(Json::parse(text));
      FAIL("expected ValidationError");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::ValidationError);
      REQUIRE(e.cause());
      CHECK(*e.cause() == cause);
    }
  }
  CHECK_THROWS_MATCHES(parse_document(Json::parse(R"({"dim": 2, "rays": {"a": [0, 0], "b": [0, 1]},
                                                        "groups": {"g": ["a", "b"]}})")),
                       Error, kind_is(ErrorKind::ValidationError));
}

TEST_CASE("tolerance layering", "[io]") {
  const auto plain = document_tolerance(z_doc());
  CHECK(plain.eps_rank == TolerancePolicy{}.eps_rank);
  CHECK(plain.eps_entry == TolerancePolicy{}.eps_entry);

  auto doc = z_doc();
  doc["eps_entry"] = 1e-6;
  doc["eps_subspace"] = 1e-3;
  const auto from_doc = document_tolerance(doc);
  CHECK(from_doc.eps_entry == 1e-6);
  CHECK(from_doc.eps_subspace == 1e-3);
  CHECK(from_doc.eps_rank == TolerancePolicy{}.eps_rank);

  ToleranceOverrides over;
  over.eps_entry = 1e-4;
  const auto layered = document_tolerance(doc, over);
  CHECK(layered.eps_entry == 1e-4);
  CHECK(layered.eps_subspace == 1e-3);
  CHECK(parse_document(doc, over).tolerance().eps_entry == 1e-4);

  over.eps_rank = -1.0;
  CHECK_THROWS_MATCHES(document_tolerance(doc, over), Error, kind_is(ErrorKind::ParseError));

  // a loose document tolerance admits a matrix the default rejects
  const auto loose = Json::parse(R"({"dim": 2, "eps_entry": 1e-2, "eps_subspace": 1e-1,
      "contexts": {"z": [[[1.001, 0], [0, 0]], [[0, 0], [0, 1]]]}})");
  CHECK_NOTHROW(parse_document(loose));
  auto strict = loose;
  strict.erase("eps_entry");
  strict.erase("eps_subspace");
  CHECK_THROWS_MATCHES(parse_document(strict), Error, kind_is(ErrorKind::ValidationError));
}

TEST_CASE("matrix input is kept verbatim and rays are normalized", "[io]") {
  const auto noisy = Json::parse(R"({"dim": 2, "contexts": {"z": [[[1.0000000000001, 0], [0, 0]], [[0, 0], [0, 1]]]}})");
  CHECK(parse_document(noisy).contexts()[0].members()[0].matrix()(0, 0) == Complex(1.0000000000001, 0.0));

  const auto rays = parse_document(Json::parse(R"({"dim": 2, "rays": {"a": [[0, 5], [0, 5]], "b": [2, -2]},
                                                    "groups": {"x": ["a", "b"]}})"));
  CHECK(max_abs(rays.contexts()[0].members()[0].matrix() - pauli::matrix('x', 1)) < 1e-15);
}

TEST_CASE("emit and parse round trip", "[io][property]") {
  check_same_collection(parse_document(emit(pauli_contexts())), pauli_contexts());
  check_same_collection(parse_document(Json::parse(emit(pauli_contexts()).dump())), pauli_contexts());

  Rng rng(71);
  for (int trial = 0; trial < 30; ++trial) {
    const Eigen::Index n = 2 + trial % 3;
    std::vector<MaximalContext> ctxs;
    if (trial % 3 == 0) {
      std::vector<std::size_t> pos;
      for (int k = 0; k < 3; ++k) pos.push_back(static_cast<std::size_t>(rng() % n));
      const auto shared = kslat::testing::shared_ray_collection(kslat::testing::random_state(n, rng), pos, rng);
      ctxs = shared.contexts();
    } else {
      ctxs.push_back(kslat::testing::random_rank1_context(n, rng, "a"));
      ctxs.push_back(kslat::testing::random_block_context({1, n - 1}, rng, "b"));
    }
    const auto c = ContextCollection::build(ctxs);
    const auto text = emit(c).dump();
    check_same_collection(parse_document(Json::parse(text)), c);
  }
}

TEST_CASE("parse_state", "[io]") {
  const auto v = parse_state("1,0;0,0");
  REQUIRE(v.size() == 2);
  CHECK(v(0) == Complex(1.0, 0.0));
  CHECK(v(1) == Complex(0.0, 0.0));

  const auto w = parse_state(" 0.5 , -1e-3 ; +2 ; -0,1 ");
  REQUIRE(w.size() == 3);
  CHECK(w(0) == Complex(0.5, -1e-3));
  CHECK(w(1) == Complex(2.0, 0.0));
  CHECK(w(2) == Complex(0.0, 1.0));

  for (const char* bad : {"", ";", "1,0;", "a,b", "1,2,3", "1;;0", "1,", "nan-ish"}) {
    INFO(bad);
    CHECK_THROWS_MATCHES(parse_state(bad), Error, kind_is(ErrorKind::ParseError));
  }
}
