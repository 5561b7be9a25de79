// Copyright 2026 The qmlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qmlab/qmlab.h"

#include <cstring>
#include <memory>
#include <new>
#include <string>

#include "qmlab/error.hpp"
#include "qmlab/experiments.hpp"
#include "qmlab/io.hpp"
#include "qmlab/parallel.hpp"

struct qmlab_config {
  qmlab::Config config;
};

struct qmlab_report {
  qmlab::ExperimentReport report;
};

struct qmlab_field {
  qmlab::FieldHeader header;
  std::vector<std::uint8_t> bytes;
  std::vector<double> data;
};

namespace {

thread_local std::string last_error;

qmlab_status record(qmlab_status s, const std::string& what) {
  last_error = what;
  return s;
}

// Runs body, mapping exceptions onto status codes.
template <class F>
qmlab_status guarded(F&& body) {
  try {
    body();
    last_error.clear();
    return QMLAB_OK;
  } catch (const qmlab::Error& e) {
    return record(static_cast<qmlab_status>(static_cast<int>(e.code())), e.what());
  } catch (const std::bad_alloc&) {
    return record(QMLAB_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return record(QMLAB_ERR_INTERNAL, e.what());
  } catch (...) {
    return record(QMLAB_ERR_INTERNAL, "unknown error");
  }
}

qmlab_status null_arg(const char* what) {
  return record(QMLAB_ERR_INVALID_ARGUMENT, std::string(what) + " is NULL");
}

}  // namespace

extern "C" {

const char* qmlab_version(void) { return "0.1.0"; }

const char* qmlab_last_error(void) { return last_error.c_str(); }

int qmlab_thread_count(void) { return qmlab::worker_count(); }

qmlab_status qmlab_config_load(const char* path, qmlab_config** out) {
  if (!path) return null_arg("path");
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] { *out = new qmlab_config{qmlab::Config::load(path)}; });
}

qmlab_status qmlab_config_parse(const char* text, qmlab_config** out) {
  if (!text) return null_arg("text");
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] { *out = new qmlab_config{qmlab::Config::parse(text)}; });
}

qmlab_status qmlab_config_set(qmlab_config* config, const char* key, const char* value) {
  if (!config) return null_arg("config");
  if (!key) return null_arg("key");
  if (!value) return null_arg("value");
  return guarded([&] { config->config.set(key, value); });
}

void qmlab_config_free(qmlab_config* config) { delete config; }

qmlab_status qmlab_run(const char* command, const qmlab_config* config, qmlab_report** out) {
  if (!command) return null_arg("command");
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] {
    const qmlab::Config empty;
    const qmlab::Config& cfg = config ? config->config : empty;
    const auto plan = qmlab::plan_from_config(qmlab::parse_kind(command), cfg);
    *out = new qmlab_report{qmlab::run_experiment(plan)};
  });
}

qmlab_status qmlab_report_verdict(const qmlab_report* report, qmlab_verdict* out) {
  if (!report) return null_arg("report");
  if (!out) return null_arg("out");
  *out = static_cast<qmlab_verdict>(static_cast<int>(report->report.verdict()));
  last_error.clear();
  return QMLAB_OK;
}

qmlab_status qmlab_report_fitted_rate(const qmlab_report* report, double* out) {
  if (!report) return null_arg("report");
  if (!out) return null_arg("out");
  *out = report->report.fitted_rate;
  last_error.clear();
  return QMLAB_OK;
}

size_t qmlab_report_check_count(const qmlab_report* report) {
  return report ? report->report.checks.size() : 0;
}

qmlab_status qmlab_report_check(const qmlab_report* report, size_t index, const char** name,
                                qmlab_verdict* verdict, const char** detail) {
  if (!report) return null_arg("report");
  const auto& checks = report->report.checks;
  if (index >= checks.size())
    return record(QMLAB_ERR_INVALID_ARGUMENT, "check index out of range");
  const auto& c = checks[index];
  if (name) *name = c.name.c_str();
  if (verdict) *verdict = static_cast<qmlab_verdict>(static_cast<int>(c.verdict));
  if (detail) *detail = c.detail.c_str();
  last_error.clear();
  return QMLAB_OK;
}

qmlab_status qmlab_report_json(const qmlab_report* report, char** out) {
  if (!report) return null_arg("report");
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] {
    const std::string s = report->report.to_json().dump(2);
    char* buf = new char[s.size() + 1];
    std::memcpy(buf, s.c_str(), s.size() + 1);
    *out = buf;
  });
}

qmlab_status qmlab_report_write(const qmlab_report* report, const char* dir) {
  if (!report) return null_arg("report");
  if (!dir) return null_arg("dir");
  return guarded([&] { qmlab::write_report(report->report, dir); });
}

void qmlab_report_free(qmlab_report* report) { delete report; }

void qmlab_string_free(char* s) { delete[] s; }

qmlab_status qmlab_field_load(const char* path, qmlab_field** out) {
  if (!path) return null_arg("path");
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] {
    auto f = std::make_unique<qmlab_field>();
    f->bytes = qmlab::read_bytes(path);
    f->header = qmlab::decode_header(f->bytes);
    const qmlab::ComplexPlane values =
        (f->header.flags & qmlab::kFieldCylinder)
            ? qmlab::decode_cyl_field(f->bytes).values
            : qmlab::decode_plane_field(f->bytes).values();
    f->data.reserve(2 * static_cast<std::size_t>(values.size()));
    for (Eigen::Index i = 0; i < values.rows(); ++i)
      for (Eigen::Index j = 0; j < values.cols(); ++j) {
        f->data.push_back(values(i, j).real());
        f->data.push_back(values(i, j).imag());
      }
    *out = f.release();
  });
}

qmlab_status qmlab_field_save(const qmlab_field* field, const char* path) {
  if (!field) return null_arg("field");
  if (!path) return null_arg("path");
  return guarded([&] { qmlab::write_bytes(path, field->bytes); });
}

qmlab_status qmlab_field_shape(const qmlab_field* field, uint32_t* n0, uint32_t* n1,
                               uint32_t* flags) {
  if (!field) return null_arg("field");
  if (n0) *n0 = field->header.n0;
  if (n1) *n1 = field->header.n1;
  if (flags) *flags = field->header.flags;
  last_error.clear();
  return QMLAB_OK;
}

qmlab_status qmlab_field_data(const qmlab_field* field, const double** data) {
  if (!field) return null_arg("field");
  if (!data) return null_arg("data");
  *data = field->data.data();
  last_error.clear();
  return QMLAB_OK;
}

void qmlab_field_free(qmlab_field* field) { delete field; }

}  // extern "C"
