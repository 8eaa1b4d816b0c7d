#include "doctest.h"
#include "slorb/experiments.hpp"

using namespace slorb;

TEST_CASE("config round trip") {
  ExperimentConfig cfg;
  cfg.field_spec = "Fq((t)):q=2:N=14";
  cfg.truncation = 5;
  cfg.depths = {0, 2, 3};
  cfg.seed = 99;
  ExperimentConfig back = ExperimentConfig::from_json_text(cfg.to_json_text());
  CHECK(back.field_spec == cfg.field_spec);
  CHECK(back.truncation == cfg.truncation);
  CHECK(back.depths == cfg.depths);
  CHECK(back.seed == cfg.seed);
}

TEST_CASE("classes experiment: counts per field") {
  for (auto [spec, count] : {std::pair<const char*, long>{"Qp:p=3:N=12", 4},
                             {"Qp:p=2:N=12", 8},
                             {"Fq((t)):q=2:N=12", 8}}) {
    ExperimentConfig cfg;
    cfg.field_spec = spec;
    cfg.truncation = std::string(spec).find("Fq") == 0 ? 5 : 3;
    Report rep = exp_unipotent_classes(cfg);
    INFO(spec);
    CHECK(rep.all_pass());
    CHECK(rep.rows[0].fields[0].second == std::to_string(count));
  }
}

TEST_CASE("fourier experiment passes") {
  ExperimentConfig cfg;
  cfg.field_spec = "Qp:p=3:N=12";
  Report rep = exp_fourier(cfg);
  CHECK(rep.all_pass());
  CHECK(rep.rows.size() >= 20);  // the acceptance grid size
}

TEST_CASE("transfer experiment passes over Q_3") {
  ExperimentConfig cfg;
  cfg.field_spec = "Qp:p=3:N=30";
  cfg.depths = {0, 1, 2, 3};
  Report rep = exp_transfer(cfg);
  if (!rep.all_pass()) {
    for (const ReportRow& r : rep.rows)
      if (!r.pass) { INFO(r.key); CHECK(r.pass); }
  }
  CHECK(rep.all_pass());
}

TEST_CASE("theorem-th experiment passes over Q_3") {
  ExperimentConfig cfg;
  cfg.field_spec = "Qp:p=3:N=30";
  cfg.depths = {1, 2, 3};
  Report rep = exp_theorem_th(cfg);
  if (!rep.all_pass()) {
    for (const ReportRow& r : rep.rows)
      if (!r.pass) { INFO(r.key); CHECK(r.pass); }
  }
  CHECK(rep.all_pass());
}

TEST_CASE("true unipotent demo passes") {
  ExperimentConfig cfg;
  Report rep = exp_true_unipotent_demo(cfg);
  CHECK(rep.all_pass());
  CHECK(rep.rows.size() == 2);
}

TEST_CASE("reports are deterministic and serializable") {
  ExperimentConfig cfg;
  cfg.field_spec = "Qp:p=3:N=12";
  Report a = exp_unipotent_classes(cfg);
  Report b = exp_unipotent_classes(cfg);
  CHECK(a.csv() == b.csv());
  CHECK(a.json() == b.json());
  CHECK(a.csv().find("pair:") != std::string::npos);
  CHECK(a.json().find("\"all_pass\": true") != std::string::npos);
}
