#include "gradedk/audit.hpp"

#include <catch_amalgamated.hpp>

using namespace gradedk;

TEST_CASE("displayed identities fail on their counterexamples", "[audit]") {
  const AuditEntry cayley = audit_cayley_resolvent(1);
  CHECK(cayley.displayed_residual == Catch::Approx(4.0));  // |-1 - 3|
  CHECK(cayley.forced_residual < 1e-12);
  CHECK(cayley.correction_confirmed());

  const AuditEntry square = audit_bounded_transform_square(2);
  CHECK(square.displayed_residual == Catch::Approx(2.0));  // |-1 - 1|
  CHECK(square.forced_residual < 1e-12);
  CHECK(square.correction_confirmed());

  const AuditEntry diff = audit_projection_difference(3);
  CHECK(diff.displayed_residual == Catch::Approx(3.0));  // |eps - 2| = |diag(-1, -3)|
  CHECK(diff.forced_residual < 1e-12);

  const AuditEntry tensor = audit_tensor_representation(4);
  CHECK(tensor.displayed_residual == Catch::Approx(2.0));
  CHECK(tensor.forced_residual < 1e-12);

  const AuditEntry homotopy = audit_inverse_homotopy_square(5);
  CHECK(homotopy.displayed_residual > 1.0);
  CHECK(homotopy.forced_residual < 1e-12);
}

TEST_CASE("identity_audit lists both flagged corrections first", "[audit]") {
  const auto entries = identity_audit(7);
  REQUIRE(entries.size() == 5);
  CHECK(entries[0].primary);
  CHECK(entries[1].primary);
  for (const auto& e : entries) CHECK(e.correction_confirmed());
}
