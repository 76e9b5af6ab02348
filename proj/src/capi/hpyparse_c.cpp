/*
 * Copyright 2026 The hpyparse Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "hpyparse/hpyparse.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <sstream>
#include <string>

#include "hpyparse/config.hpp"
#include "hpyparse/error.hpp"
#include "hpyparse/model_io.hpp"
#include "hpyparse/pipeline.hpp"

struct hp_config {
  hpyp::RunConfig cfg;
};

struct hp_model {
  hpyp::Model model;
};

namespace {

thread_local std::string last_error;

template <typename F>
hp_status guarded(F&& f) {
  try {
    f();
    last_error.clear();
    return HP_OK;
  } catch (const hpyp::UsageError& e) {
    last_error = e.what();
    return HP_USAGE_ERROR;
  } catch (const hpyp::DataError& e) {
    last_error = e.what();
    return HP_DATA_ERROR;
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return HP_INTERNAL_ERROR;
  } catch (const std::exception& e) {
    last_error = e.what();
    return HP_INTERNAL_ERROR;
  } catch (...) {
    last_error = "unknown error";
    return HP_INTERNAL_ERROR;
  }
}

char* copy_out(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.data(), s.size());
  p[s.size()] = '\0';
  return p;
}

void require(const void* p, const char* name) {
  if (!p) throw hpyp::UsageError(std::string(name) + " must not be NULL");
}

}  // namespace

extern "C" {

const char* hp_version(void) { return "1.0.0"; }

const char* hp_last_error(void) { return last_error.c_str(); }

void hp_free(char* text) { std::free(text); }

hp_status hp_config_create(hp_config** out) {
  return guarded([&] {
    require(out, "out");
    *out = new hp_config();
  });
}

void hp_config_destroy(hp_config* cfg) { delete cfg; }

hp_status hp_config_set(hp_config* cfg, const char* key, const char* value) {
  return guarded([&] {
    require(cfg, "cfg");
    require(key, "key");
    require(value, "value");
    hpyp::apply_setting(cfg->cfg, key, value);
  });
}

hp_status hp_config_load(hp_config* cfg, const char* text) {
  return guarded([&] {
    require(cfg, "cfg");
    require(text, "text");
    std::istringstream in(text);
    hpyp::load_config(cfg->cfg, in);
  });
}

hp_status hp_config_validate(const hp_config* cfg) {
  return guarded([&] {
    require(cfg, "cfg");
    hpyp::validate(cfg->cfg);
  });
}

hp_status hp_config_describe(const hp_config* cfg, char** out) {
  return guarded([&] {
    require(cfg, "cfg");
    require(out, "out");
    *out = copy_out(hpyp::describe(cfg->cfg));
  });
}

hp_status hp_train(const hp_config* cfg, const char* corpus, hp_model** out, char** report) {
  return guarded([&] {
    require(cfg, "cfg");
    require(corpus, "corpus");
    require(out, "out");
    std::istringstream in(corpus);
    hpyp::TrainReport rep;
    auto m = std::make_unique<hp_model>();
    m->model = hpyp::train_model(cfg->cfg, in, &rep);
    if (report) *report = copy_out(rep.text());
    *out = m.release();
  });
}

hp_status hp_model_save(const hp_model* model, const char* path) {
  return guarded([&] {
    require(model, "model");
    require(path, "path");
    hpyp::save_model(model->model, path);
  });
}

hp_status hp_model_load(const char* path, hp_model** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    auto m = std::make_unique<hp_model>();
    m->model = hpyp::load_model(path);
    *out = m.release();
  });
}

hp_status hp_model_serialize(const hp_model* model, char** bytes, size_t* size) {
  return guarded([&] {
    require(model, "model");
    require(bytes, "bytes");
    require(size, "size");
    const std::string s = hpyp::serialize_model(model->model);
    *bytes = copy_out(s);
    *size = s.size();
  });
}

hp_status hp_model_deserialize(const char* bytes, size_t size, hp_model** out) {
  return guarded([&] {
    require(bytes, "bytes");
    require(out, "out");
    auto m = std::make_unique<hp_model>();
    m->model = hpyp::deserialize_model(std::string_view(bytes, size));
    *out = m.release();
  });
}

void hp_model_destroy(hp_model* model) { delete model; }

hp_status hp_predict(const hp_model* model, const hp_config* cfg, const char* input, char** output, char** log) {
  return guarded([&] {
    require(model, "model");
    require(cfg, "cfg");
    require(input, "input");
    require(output, "output");
    std::istringstream in(input);
    std::ostringstream out;
    std::ostringstream log_stream;
    hpyp::predict(model->model, cfg->cfg, in, out, log ? &log_stream : nullptr);
    char* o = copy_out(out.str());
    if (log) {
      try {
        *log = copy_out(log_stream.str());
      } catch (...) {
        std::free(o);
        throw;
      }
    }
    *output = o;
  });
}

hp_status hp_evaluate(const hp_config* cfg, const char* gold, const char* predicted, char** report) {
  return guarded([&] {
    require(cfg, "cfg");
    require(gold, "gold");
    require(predicted, "predicted");
    require(report, "report");
    std::istringstream g(gold);
    std::istringstream p(predicted);
    std::ostringstream out;
    hpyp::evaluate(cfg->cfg, g, p, out);
    *report = copy_out(out.str());
  });
}

hp_status hp_diagnose(const hp_model* model, const hp_config* cfg, const char* sentences, char** report) {
  return guarded([&] {
    require(model, "model");
    require(cfg, "cfg");
    require(sentences, "sentences");
    require(report, "report");
    std::istringstream in(sentences);
    std::ostringstream out;
    hpyp::diagnose(model->model, cfg->cfg, in, out);
    *report = copy_out(out.str());
  });
}

}  // extern "C"
