// Command-line front end: JSON in, JSON out.
// Exit codes: 0 success or true verdict, 1 false verdict, 2 error.

#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "CLI11.hpp"
#include "fqr/fqr.hpp"
#include "fqr/json_io.hpp"

namespace {

using fqr::Error;
using fqr::ErrorCode;
using fqr::io::json;

struct IoFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoFailure("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return json::parse(ss.str());
}

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

int fail(std::string_view code, const std::string& message) {
  std::cerr << json{{"error", code}, {"message", message}}.dump() << "\n";
  return 2;
}

fqr::UniverseMode universe_mode(const std::string& s) {
  return s == "superset" ? fqr::UniverseMode::Superset : fqr::UniverseMode::Exact;
}

json skeleton_list(const fqr::Quiver& q, const std::vector<fqr::Skeleton>& list) {
  json out = json::array();
  for (const auto& s : list) out.push_back(fqr::format_skeleton(q, s));
  return out;
}

json path_list(const fqr::Quiver& q, const std::vector<fqr::FramedPath>& paths) {
  json out = json::array();
  for (const auto& p : paths) out.push_back(fqr::format_path(q, p));
  return out;
}

template <class Visit>
auto with_rep(const std::string& file, Visit&& visit) {
  auto any = fqr::io::parse_any_rep(read_json(file));
  return std::visit(std::forward<Visit>(visit), any);
}

// Field for documents that may omit one: --field wins, then the document, then Q.
fqr::AnyField field_for(const std::optional<std::string>& flag, const fqr::io::ShapeDocument& doc) {
  if (flag) return fqr::parse_field_flag(*flag);
  if (doc.field) return *doc.field;
  return fqr::RationalField{};
}

template <fqr::ExactField F>
fqr::Skeleton choose_skeleton(const fqr::FramedRep<F>& rep, const std::string& list) {
  if (!list.empty()) return fqr::io::parse_skeleton_list(rep.quiver, rep.shape, list);
  auto all = fqr::skeleta_of_rep(rep);
  if (all.empty()) throw Error(ErrorCode::NotStable, "representation lies in no chart");
  return all.front();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stable framed quiver representations: skeleta, normal forms, charts"};
  app.require_subcommand(1);
  std::optional<std::string> field_flag;
  const char* field_help = "rational | prime:<p>; overrides the document field";

  std::function<int()> action;
  std::string file, file2, skeleton, coords, from, to, relations, universe = "exact";
  std::uint64_t seed = 0;
  long entry_bound = 3;

  auto* stable = app.add_subcommand("stable", "Is the representation stable?");
  stable->add_option("FILE", file)->required();
  stable->callback([&] {
    action = [&] {
      bool s = with_rep(file, [](const auto& rep) { return fqr::is_stable(rep); });
      emit({{"stable", s}});
      return s ? 0 : 1;
    };
  });

  auto* skel = app.add_subcommand("skeleton", "Greedy (canonical) skeleton of a stable representation");
  skel->add_option("FILE", file)->required();
  skel->callback([&] {
    action = [&] {
      with_rep(file, [](const auto& rep) { emit({{"skeleton", fqr::format_skeleton(rep.quiver, fqr::greedy_skeleton(rep))}}); });
      return 0;
    };
  });

  auto* skeleta = app.add_subcommand("skeleta", "All skeleta of a representation");
  skeleta->add_option("FILE", file)->required();
  skeleta->callback([&] {
    action = [&] {
      with_rep(file, [](const auto& rep) { emit({{"skeleta", skeleton_list(rep.quiver, fqr::skeleta_of_rep(rep))}}); });
      return 0;
    };
  });

  auto* charts = app.add_subcommand("charts", "Abstract skeleta, path universe and chart dimension of a shape");
  charts->add_option("QFILE", file)->required();
  charts->add_option("--universe", universe, "exact | superset")->check(CLI::IsMember({"exact", "superset"}));
  charts->callback([&] {
    action = [&] {
      auto doc = fqr::io::parse_shape_document(read_json(file));
      auto atlas = fqr::ShapeAtlas::build(doc.quiver, doc.shape, universe_mode(universe));
      auto dim = fqr::chart_dimension(atlas);
      emit({{"skeleta", skeleton_list(doc.quiver, atlas.skeleta)},
            {"gamma", path_list(doc.quiver, atlas.universe.gamma)},
            {"gamma_tilde", path_list(doc.quiver, atlas.universe.gamma_tilde)},
            {"dimension", dim.dimension},
            {"negative_dimension", dim.negative},
            {"chart_entries", dim.per_chart}});
      return 0;
    };
  });

  auto* nf = app.add_subcommand("normal-form", "Normal form on a chart (default: least skeleton of the representation)");
  nf->add_option("FILE", file)->required();
  nf->add_option("--skeleton", skeleton, "comma-separated path labels");
  nf->callback([&] {
    action = [&] {
      with_rep(file, [&](const auto& rep) {
        auto s = choose_skeleton(rep, skeleton);
        auto out = fqr::io::emit_rep(fqr::normal_form(rep, s));
        out["skeleton"] = fqr::format_skeleton(rep.quiver, s);
        emit(out);
      });
      return 0;
    };
  });

  auto* iso = app.add_subcommand("iso", "Decide isomorphism; emits a verified witness when isomorphic");
  iso->add_option("FILE1", file)->required();
  iso->add_option("FILE2", file2)->required();
  iso->callback([&] {
    action = [&] {
      auto a = fqr::io::parse_any_rep(read_json(file));
      auto b = fqr::io::parse_any_rep(read_json(file2));
      if (a.index() != b.index()) throw Error(ErrorCode::FieldMismatch, "documents use different fields");
      return std::visit(
          [&](const auto& r1) {
            using Rep = std::decay_t<decltype(r1)>;
            const auto& r2 = std::get<Rep>(b);
            auto d = fqr::iso_check(r1, r2);
            json out = {{"verdict", fqr::to_string(d.verdict)}};
            if (d.skeleton) out["skeleton"] = fqr::format_skeleton(r1.quiver, *d.skeleton);
            if (d.witness) out["witness"] = fqr::io::emit_group_element(*d.witness);
            emit(out);
            return d.verdict == fqr::IsoVerdict::Isomorphic ? 0 : 1;
          },
          a);
    };
  });

  auto* project = app.add_subcommand("project", "Local chart coordinates of a representation");
  project->add_option("FILE", file)->required();
  project->add_option("--skeleton", skeleton, "comma-separated path labels")->required();
  project->callback([&] {
    action = [&] {
      with_rep(file, [&](const auto& rep) {
        auto s = fqr::io::parse_skeleton_list(rep.quiver, rep.shape, skeleton);
        emit(fqr::io::emit_chart_point(rep.quiver, fqr::project_chart(rep, s)));
      });
      return 0;
    };
  });

  auto* section = app.add_subcommand("section", "Representation in normal form from chart coordinates");
  section->add_option("QFILE", file)->required();
  section->add_option("--skeleton", skeleton, "comma-separated path labels")->required();
  section->add_option("--coords", coords, "chart point document")->required();
  section->add_option("--field", field_flag, field_help);
  section->callback([&] {
    action = [&] {
      auto doc = fqr::io::parse_shape_document(read_json(file));
      auto s = fqr::io::parse_skeleton_list(doc.quiver, doc.shape, skeleton);
      std::visit(
          [&](const auto& f) {
            auto c = fqr::io::parse_chart_point(f, doc.quiver, doc.shape, read_json(coords), s);
            emit(fqr::io::emit_rep(fqr::section(f, doc.quiver, s, c)));
          },
          field_for(field_flag, doc));
      return 0;
    };
  });

  auto* trans = app.add_subcommand("transition", "Change of chart coordinates");
  trans->add_option("QFILE", file)->required();
  trans->add_option("--from", from, "source skeleton")->required();
  trans->add_option("--to", to, "target skeleton")->required();
  trans->add_option("--coords", coords, "chart point on the source chart")->required();
  trans->add_option("--field", field_flag, field_help);
  trans->callback([&] {
    action = [&] {
      auto doc = fqr::io::parse_shape_document(read_json(file));
      auto s = fqr::io::parse_skeleton_list(doc.quiver, doc.shape, from);
      auto t = fqr::io::parse_skeleton_list(doc.quiver, doc.shape, to);
      std::visit(
          [&](const auto& f) {
            auto c = fqr::io::parse_chart_point(f, doc.quiver, doc.shape, read_json(coords), s);
            emit(fqr::io::emit_chart_point(doc.quiver, fqr::transition(f, doc.quiver, s, t, c)));
          },
          field_for(field_flag, doc));
      return 0;
    };
  });

  auto* plk = app.add_subcommand("pluecker", "Plücker coordinates over the path universe");
  plk->add_option("FILE", file)->required();
  plk->callback([&] {
    action = [&] {
      with_rep(file, [](const auto& rep) {
        auto atlas = fqr::ShapeAtlas::build(rep.quiver, rep.shape);
        emit({{"pluecker", fqr::io::emit_pluecker(rep.quiver, fqr::pluecker(fqr::build_row_bundle(rep, atlas.universe.gamma_tilde)))}});
      });
      return 0;
    };
  });

  auto* crd = app.add_subcommand("coords", "Essential and exceed Plücker coordinates of a shape");
  crd->add_option("QFILE", file)->required();
  crd->callback([&] {
    action = [&] {
      auto doc = fqr::io::parse_shape_document(read_json(file));
      auto c = fqr::classify_coordinates(doc.quiver, doc.shape);
      json essential = json::array(), exceed = json::array();
      for (const auto& [v, k] : c.essential) essential.push_back(fqr::format_key(doc.quiver, k));
      for (const auto& [v, k] : c.exceed) exceed.push_back(fqr::format_key(doc.quiver, k));
      emit({{"total", c.total()}, {"essential", essential}, {"exceed", exceed}});
      return 0;
    };
  });

  auto* verify = app.add_subcommand("verify", "Evaluate relations on the Plücker vector of one or more representations");
  verify->add_option("FILE", file, "a representation or a JSON list of them")->required();
  verify->add_option("--relations", relations, "relation file")->required();
  verify->callback([&] {
    action = [&] {
      auto doc = read_json(file);
      auto rels = fqr::io::parse_relations(read_json(relations));
      std::vector<json> docs = doc.is_array() ? std::vector<json>(doc.begin(), doc.end()) : std::vector<json>{doc};
      if (docs.empty()) throw Error(ErrorCode::SchemaError, "no representations to verify");
      auto first = fqr::io::parse_any_rep(docs.front());
      return std::visit(
          [&](const auto& rep0) {
            using Rep = std::decay_t<decltype(rep0)>;
            std::vector<Rep> samples;
            for (const auto& d : docs) {
              auto any = fqr::io::parse_any_rep(d);
              if (!std::holds_alternative<Rep>(any)) throw Error(ErrorCode::FieldMismatch, "samples use different fields");
              samples.push_back(std::get<Rep>(std::move(any)));
              if (!(samples.back().field == rep0.field) || !(samples.back().shape == rep0.shape) ||
                  !(samples.back().quiver == rep0.quiver)) {
                throw Error(ErrorCode::ShapeMismatch, "samples must share field, quiver and shape");
              }
            }
            auto atlas = fqr::ShapeAtlas::build(rep0.quiver, rep0.shape);
            auto report = fqr::verify_relations<std::decay_t<decltype(rep0.field)>>(rels, samples, atlas);
            json rows = json::array();
            for (std::size_t r = 0; r < rels.size(); ++r) {
              json values = json::array();
              for (const auto& v : report.values[r]) values.push_back(rep0.field.format(v));
              rows.push_back({{"name", rels[r].name}, {"values", values}});
            }
            emit({{"all_zero", report.all_zero()}, {"relations", rows}});
            return report.all_zero() ? 0 : 1;
          },
          first);
    };
  });

  auto* rnd = app.add_subcommand("random", "Seeded random stable representation of a shape");
  rnd->add_option("QFILE", file)->required();
  rnd->add_option("--seed", seed)->required();
  rnd->add_option("--entry-bound", entry_bound, "entries drawn from [-B, B]");
  rnd->add_option("--field", field_flag, field_help);
  rnd->callback([&] {
    action = [&] {
      auto doc = fqr::io::parse_shape_document(read_json(file));
      std::visit(
          [&](const auto& f) {
            auto sample = fqr::random_stable(f, doc.quiver, doc.shape, seed, entry_bound);
            auto out = fqr::io::emit_rep(sample.rep);
            out["rejections"] = sample.rejections;
            emit(out);
          },
          field_for(field_flag, doc));
      return 0;
    };
  });

  auto* orc = app.add_subcommand("oracle", "Brute-force oracles over GF(p)");
  orc->require_subcommand(1);
  auto* ostable = orc->add_subcommand("stable", "Stability by enumerating graded subspaces");
  ostable->add_option("FILE", file)->required();
  ostable->callback([&] {
    action = [&] {
      auto any = fqr::io::parse_any_rep(read_json(file));
      auto* rep = std::get_if<fqr::FramedRep<fqr::PrimeField>>(&any);
      if (!rep) throw Error(ErrorCode::InvalidField, "oracles need a prime field");
      bool s = fqr::oracle::stability_bruteforce(*rep);
      emit({{"stable", s}});
      return s ? 0 : 1;
    };
  });
  auto* oiso = orc->add_subcommand("iso", "Isomorphism by enumerating GL(alpha)");
  oiso->add_option("FILE1", file)->required();
  oiso->add_option("FILE2", file2)->required();
  oiso->callback([&] {
    action = [&] {
      auto a = fqr::io::parse_any_rep(read_json(file));
      auto b = fqr::io::parse_any_rep(read_json(file2));
      auto* r1 = std::get_if<fqr::FramedRep<fqr::PrimeField>>(&a);
      auto* r2 = std::get_if<fqr::FramedRep<fqr::PrimeField>>(&b);
      if (!r1 || !r2) throw Error(ErrorCode::InvalidField, "oracles need a prime field");
      if (!(r1->field == r2->field)) throw Error(ErrorCode::FieldMismatch, "documents use different fields");
      auto r = fqr::oracle::orbit_iso_bruteforce(*r1, *r2);
      json out = {{"isomorphic", r.isomorphic}};
      if (r.witness) out["witness"] = fqr::io::emit_group_element(*r.witness);
      emit(out);
      return r.isomorphic ? 0 : 1;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("UsageError", e.what());
  }

  try {
    return action ? action() : fail("UsageError", "no subcommand");
  } catch (const Error& e) {
    return fail(fqr::to_string(e.code()), e.what());
  } catch (const json::exception& e) {
    return fail("SchemaError", e.what());
  } catch (const IoFailure& e) {
    return fail("IOError", e.what());
  }
}
