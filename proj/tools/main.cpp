// Command-line harness: structure classification, adjoints, complements,
// group membership, gradients, Laplacians, and the randomized verification
// suite. Exit codes: 0 success/pass, 1 check failure, 2 usage or input error.

#include <cstdio>
#include <functional>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "bform/adjoints.hpp"
#include "bform/diffops.hpp"
#include "bform/harness.hpp"
#include "bform/io.hpp"
#include "bform/subspaces.hpp"
#include "bform/symmetry.hpp"

namespace {

using bform::io::json;

std::string format_value(double v) {
  if (v == 0.0) v = 0.0;  // normalize -0
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void print_check_line(const bform::CheckReport& c) {
  std::printf("[%s] %-38s trials=%-5d max_residual=%-12s tol=%g%s%s\n", c.pass ? "PASS" : "FAIL",
              c.name.c_str(), c.trials, format_value(c.max_residual).c_str(), c.tolerance,
              c.note.empty() ? "" : "  note: ", c.note.c_str());
}

bform::Side parse_side(const std::string& side) {
  if (side == "left") return bform::Side::left;
  if (side == "right") return bform::Side::right;
  throw bform::InvalidParameters("side must be 'left' or 'right'");
}

int emit_reports(const bform::IdentityReport& report, bool json_out) {
  if (json_out) {
    std::cout << bform::io::report_to_json(report).dump(2) << "\n";
  } else {
    for (const auto& c : report.checks) print_check_line(c);
  }
  return report.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"calculus of non-degenerate bilinear structures on R^n"};
  app.require_subcommand(1);

  bool json_out = false;
  app.add_flag("--json", json_out, "emit machine-readable JSON");

  std::function<int()> action;

  // --- classify -------------------------------------------------------------
  {
    auto* cmd = app.add_subcommand("classify", "classify a structure by symmetry and signature");
    auto form = std::make_shared<std::string>();
    auto tol = std::make_shared<double>(bform::tol::classify);
    cmd->add_option("--form", *form, "matrix file or canonical spec kind:n[:k]")->required();
    cmd->add_option("--tol", *tol, "classification tolerance");
    cmd->callback([&, form, tol] {
      action = [&, form, tol] {
        const bform::BilinearForm b = bform::io::form_from_spec(*form);
        const bform::StructureClass cls = bform::classify(b, *tol);
        if (json_out) {
          json j{{"n", b.dim()}, {"kind", bform::to_string(cls.kind)}};
          if (cls.signature) j["signature"] = {cls.signature->first, cls.signature->second};
          std::cout << j.dump(2) << "\n";
        } else {
          std::cout << bform::to_string(cls.kind);
          if (cls.signature)
            std::cout << "  signature (" << cls.signature->first << "," << cls.signature->second
                      << ")";
          std::cout << "\n";
        }
        return 0;
      };
    });
  }

  // --- pair -----------------------------------------------------------------
  {
    auto* cmd = app.add_subcommand("pair", "print the representation operator of the pair");
    auto form = std::make_shared<std::string>();
    cmd->add_option("--form", *form, "matrix file or canonical spec")->required();
    cmd->callback([&, form] {
      action = [&, form] {
        const auto pair = bform::geometric_pair(bform::io::form_from_spec(*form));
        std::cout << bform::io::matrix_to_json(pair.rep).dump(2) << "\n";
        return 0;
      };
    });
  }

  // --- adjoint ----------------------------------------------------------------
  {
    auto* cmd = app.add_subcommand("adjoint", "left/right adjoint of an operator");
    auto form = std::make_shared<std::string>();
    auto op = std::make_shared<std::string>();
    auto side = std::make_shared<std::string>("left");
    cmd->add_option("--form", *form)->required();
    cmd->add_option("--op", *op, "operator matrix file")->required();
    cmd->add_option("--side", *side, "left|right");
    cmd->callback([&, form, op, side] {
      action = [&, form, op, side] {
        const auto pair = bform::geometric_pair(bform::io::form_from_spec(*form));
        const bform::Matrix result =
            bform::adjoint(pair, bform::io::matrix_from_file(*op), parse_side(*side));
        std::cout << bform::io::matrix_to_json(result).dump(2) << "\n";
        return 0;
      };
    });
  }

  // --- perp -------------------------------------------------------------------
  {
    auto* cmd = app.add_subcommand("perp", "b-orthogonal complement of a span");
    auto form = std::make_shared<std::string>();
    auto vectors = std::make_shared<std::string>();
    auto side = std::make_shared<std::string>("left");
    cmd->add_option("--form", *form)->required();
    cmd->add_option("--vectors", *vectors, "JSON file with spanning vectors")->required();
    cmd->add_option("--side", *side, "left|right");
    cmd->callback([&, form, vectors, side] {
      action = [&, form, vectors, side] {
        const bform::BilinearForm b = bform::io::form_from_spec(*form);
        const auto spanning = bform::io::vectors_from_file(*vectors);
        const bform::Subspace v = bform::Subspace::from_vectors(spanning, b.dim());
        const bform::Subspace result = bform::perp(b, v, parse_side(*side));
        json basis = json::array();
        for (int j = 0; j < result.dim(); ++j) {
          json row = json::array();
          for (int i = 0; i < result.ambient_dim(); ++i) row.push_back(result.basis()(i, j));
          basis.push_back(std::move(row));
        }
        std::cout << json{{"n", result.ambient_dim()}, {"dim", result.dim()}, {"basis", basis}}
                         .dump(2)
                  << "\n";
        return 0;
      };
    });
  }

  // --- group-check --------------------------------------------------------------
  {
    auto* cmd = app.add_subcommand("group-check", "test membership in the symmetry group");
    auto form = std::make_shared<std::string>();
    auto op = std::make_shared<std::string>();
    auto tol = std::make_shared<double>(bform::tol::group_membership);
    cmd->add_option("--form", *form)->required();
    cmd->add_option("--op", *op)->required();
    cmd->add_option("--tol", *tol);
    cmd->callback([&, form, op, tol] {
      action = [&, form, op, tol] {
        const auto pair = bform::geometric_pair(bform::io::form_from_spec(*form));
        const auto check = bform::in_group(pair, bform::io::matrix_from_file(*op), *tol);
        if (json_out) {
          std::cout << json{{"member", check.member},
                            {"residual", check.residual},
                            {"det_residual", check.det_residual}}
                           .dump(2)
                    << "\n";
        } else {
          std::cout << (check.member ? "member" : "not a member")
                    << "  residual=" << format_value(check.residual)
                    << "  det_residual=" << format_value(check.det_residual) << "\n";
        }
        return check.member ? 0 : 1;
      };
    });
  }

  // --- algebra-basis ---------------------------------------------------------------
  {
    auto* cmd = app.add_subcommand("algebra-basis", "orthonormal basis of the Lie algebra");
    auto form = std::make_shared<std::string>();
    cmd->add_option("--form", *form)->required();
    cmd->callback([&, form] {
      action = [&, form] {
        const auto pair = bform::geometric_pair(bform::io::form_from_spec(*form));
        const auto basis = bform::algebra_basis(pair);
        json elements = json::array();
        for (const auto& x : basis.elements)
          elements.push_back(bform::io::matrix_to_json(x)["matrix"]);
        std::cout << json{{"n", pair.dim()}, {"dim", basis.dim()}, {"elements", elements}}.dump(2)
                  << "\n";
        return 0;
      };
    });
  }

  // --- grad ------------------------------------------------------------------------
  {
    auto* cmd = app.add_subcommand("grad", "form-adapted gradient at a point");
    auto form = std::make_shared<std::string>();
    auto field = std::make_shared<std::string>();
    auto point = std::make_shared<std::string>();
    auto side = std::make_shared<std::string>("left");
    cmd->add_option("--form", *form)->required();
    cmd->add_option("--field", *field, "field file or inline expression")->required();
    cmd->add_option("--point", *point, "comma-separated coordinates")->required();
    cmd->add_option("--side", *side, "left|right");
    cmd->callback([&, form, field, point, side] {
      action = [&, form, field, point, side] {
        const auto pair = bform::geometric_pair(bform::io::form_from_spec(*form));
        const auto f = bform::io::field_from_spec(*field, pair.dim());
        const bform::Vector x = bform::io::parse_point(*point);
        const bform::Vector g = bform::grad_b(pair, f, x, parse_side(*side));
        if (json_out) {
          json values = json::array();
          for (Eigen::Index i = 0; i < g.size(); ++i) values.push_back(g(i));
          std::cout << json{{"value", values}}.dump(2) << "\n";
        } else {
          for (Eigen::Index i = 0; i < g.size(); ++i)
            std::cout << (i ? "," : "") << format_value(g(i));
          std::cout << "\n";
        }
        return 0;
      };
    });
  }

  // --- laplacian ----------------------------------------------------------------------
  {
    auto* cmd = app.add_subcommand("laplacian", "form Laplacian at a point");
    auto form = std::make_shared<std::string>();
    auto field = std::make_shared<std::string>();
    auto point = std::make_shared<std::string>();
    cmd->add_option("--form", *form)->required();
    cmd->add_option("--field", *field, "field file or inline expression")->required();
    cmd->add_option("--point", *point, "comma-separated coordinates")->required();
    cmd->callback([&, form, field, point] {
      action = [&, form, field, point] {
        const auto pair = bform::geometric_pair(bform::io::form_from_spec(*form));
        const auto f = bform::io::field_from_spec(*field, pair.dim());
        const double value = bform::laplacian_b(pair, f, bform::io::parse_point(*point));
        if (json_out) std::cout << json{{"value", value}}.dump(2) << "\n";
        else std::cout << format_value(value) << "\n";
        return 0;
      };
    });
  }

  // --- check -----------------------------------------------------------------------
  {
    auto* cmd = app.add_subcommand("check", "run one named identity check");
    auto name = std::make_shared<std::string>();
    auto form = std::make_shared<std::string>();
    auto field = std::make_shared<std::string>();
    auto field2 = std::make_shared<std::string>();
    auto vfield = std::make_shared<std::string>();
    auto op = std::make_shared<std::string>();
    auto op2 = std::make_shared<std::string>();
    auto group_sample = std::make_shared<int>(10);
    auto points = std::make_shared<int>(20);
    auto seed = std::make_shared<std::uint64_t>(1);
    auto tol = std::make_shared<double>(bform::tol::identity);
    auto box = std::make_shared<double>(2.0);
    cmd->add_option("identity", *name,
                    "one of: invariant, equivariant, gradient-equivariance, "
                    "laplacian-equivariance, product-rule, adjoint-identities, kernel-image")
        ->required();
    cmd->add_option("--form", *form)->required();
    cmd->add_option("--field", *field, "scalar field (file or inline)");
    cmd->add_option("--field2", *field2, "second scalar field for product-rule");
    cmd->add_option("--vfield", *vfield, "vector field file for 'equivariant'");
    cmd->add_option("--op", *op, "operator file");
    cmd->add_option("--op2", *op2, "second operator file");
    cmd->add_option("--group-sample", *group_sample, "sampled group elements");
    cmd->add_option("--points", *points, "sample points");
    cmd->add_option("--seed", *seed, "random seed");
    cmd->add_option("--tol", *tol, "residual tolerance");
    cmd->add_option("--box", *box, "sample box half-width");
    cmd->callback([&, name, form, field, field2, vfield, op, op2, group_sample, points, seed, tol,
                   box] {
      action = [&, name, form, field, field2, vfield, op, op2, group_sample, points, seed, tol,
                box] {
        const auto pair = bform::geometric_pair(bform::io::form_from_spec(*form));
        const int n = pair.dim();
        bform::Rng rng(*seed);
        const auto pts = bform::random_points(rng, *points, n, *box);

        auto sample = [&] { return bform::GroupSample::sampled(pair, *group_sample, *seed); };
        auto need = [&](const std::string& value, const char* flag) -> const std::string& {
          if (value.empty())
            throw bform::InvalidParameters(std::string("check ") + *name + " requires " + flag);
          return value;
        };

        bform::IdentityReport report;
        if (*name == "invariant") {
          auto r = bform::check_invariant(
              bform::io::field_from_spec(need(*field, "--field"), n), sample(), pts, *tol);
          r.name = "invariant";
          report.checks.push_back(r);
        } else if (*name == "equivariant") {
          auto r = bform::check_equivariant(
              bform::io::vector_field_from_file(need(*vfield, "--vfield")), sample(), pts, *tol);
          r.name = "equivariant";
          report.checks.push_back(r);
        } else if (*name == "gradient-equivariance") {
          report = bform::gradient_equivariance_suite(
              pair, bform::io::field_from_spec(need(*field, "--field"), n), sample(), pts, *tol);
        } else if (*name == "laplacian-equivariance") {
          report.checks.push_back(bform::laplacian_equivariance(
              pair, bform::io::field_from_spec(need(*field, "--field"), n), sample(), pts, *tol));
        } else if (*name == "product-rule") {
          report = bform::product_rule_check(
              pair, bform::io::field_from_spec(need(*field, "--field"), n),
              bform::io::field_from_spec(need(*field2, "--field2"), n), pts, *tol, *seed);
        } else if (*name == "adjoint-identities") {
          const bform::Matrix a1 = field->empty() && op->empty()
                                       ? bform::random_operator(rng, n)
                                       : bform::io::matrix_from_file(need(*op, "--op"));
          const bform::Matrix a2 =
              op2->empty() ? bform::random_operator(rng, n) : bform::io::matrix_from_file(*op2);
          const auto adj = bform::check_adjoint_identities(pair, a1, a2, *tol, *seed);
          report.checks = adj.universal;
          for (const auto& c : adj.involution) {
            auto copy = c;
            if (!adj.epsilon_symmetric) {
              copy.note = "expected to fail: form is neither symmetric nor skew";
              copy.pass = true;
            }
            report.checks.push_back(copy);
          }
        } else if (*name == "kernel-image") {
          const bform::Matrix a = op->empty() ? bform::random_rank_deficient(rng, n)
                                              : bform::io::matrix_from_file(*op);
          report = bform::check_kernel_image_theorem(pair, a, *tol);
        } else {
          throw bform::InvalidParameters("unknown check name: " + *name);
        }
        return emit_reports(report, json_out);
      };
    });
  }

  // --- verify ------------------------------------------------------------------------
  {
    auto* cmd = app.add_subcommand("verify", "run the full randomized verification suite");
    auto cfg = std::make_shared<bform::SuiteConfig>();
    auto kinds = std::make_shared<std::string>();
    cmd->add_option("--seed", cfg->seed, "random seed");
    cmd->add_option("--trials", cfg->trials, "trials per structure kind");
    cmd->add_option("--n-min", cfg->n_min, "smallest dimension");
    cmd->add_option("--n-max", cfg->n_max, "largest dimension");
    cmd->add_option("--points", cfg->points, "sample points per trial");
    cmd->add_option("--group-sample", cfg->group_sample, "group elements per trial");
    cmd->add_option("--tol", cfg->tol_identity, "default identity tolerance");
    cmd->add_option("--box", cfg->point_box, "sample box half-width");
    cmd->add_option("--kinds", *kinds, "comma-separated structure kinds (default: all)");
    cmd->callback([&, cfg, kinds] {
      action = [&, cfg, kinds] {
        if (!kinds->empty()) {
          cfg->kinds.clear();
          std::stringstream stream(*kinds);
          std::string item;
          while (std::getline(stream, item, ',')) {
            const auto kind = bform::structure_kind_from_string(item);
            if (!kind) throw bform::InvalidParameters("unknown structure kind: " + item);
            cfg->kinds.push_back(*kind);
          }
        }
        const bform::SuiteReport report = bform::run_suite(*cfg);
        if (json_out) {
          std::cout << bform::io::suite_report_to_json(report).dump(2) << "\n";
        } else {
          for (const auto& c : report.checks) print_check_line(c);
          std::printf("%s  (%d checks, %.0f ms)\n", report.pass ? "PASS" : "FAIL",
                      static_cast<int>(report.checks.size()), report.wall_ms);
        }
        return report.pass ? 0 : 1;
      };
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    return action ? action() : 2;
  } catch (const bform::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
}
