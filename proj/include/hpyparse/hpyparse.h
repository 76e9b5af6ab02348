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

#ifndef HPYPARSE_H
#define HPYPARSE_H

#include <stddef.h>

#if defined(_WIN32)
#if defined(HPYPARSE_BUILDING)
#define HP_API __declspec(dllexport)
#else
#define HP_API __declspec(dllimport)
#endif
#else
#define HP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hp_status {
  HP_OK = 0,
  HP_USAGE_ERROR = 1,
  HP_DATA_ERROR = 2,
  HP_INTERNAL_ERROR = 3
} hp_status;

typedef struct hp_config hp_config;
typedef struct hp_model hp_model;

HP_API const char* hp_version(void);

/* Message of the last failed call on this thread; never NULL. */
HP_API const char* hp_last_error(void);

/* Strings returned through char** out-parameters are owned by the caller. */
HP_API void hp_free(char* text);

HP_API hp_status hp_config_create(hp_config** out);
HP_API void hp_config_destroy(hp_config* cfg);
/* key is a long flag name without dashes, e.g. "burn-in". */
HP_API hp_status hp_config_set(hp_config* cfg, const char* key, const char* value);
/* Applies key=value lines from a config file's contents. */
HP_API hp_status hp_config_load(hp_config* cfg, const char* text);
HP_API hp_status hp_config_validate(const hp_config* cfg);
/* Current settings as key=value lines. */
HP_API hp_status hp_config_describe(const hp_config* cfg, char** out);

/* Trains on a corpus in the configured task's format. report may be NULL. */
HP_API hp_status hp_train(const hp_config* cfg, const char* corpus, hp_model** out, char** report);
HP_API hp_status hp_model_save(const hp_model* model, const char* path);
HP_API hp_status hp_model_load(const char* path, hp_model** out);
HP_API hp_status hp_model_serialize(const hp_model* model, char** bytes, size_t* size);
HP_API hp_status hp_model_deserialize(const char* bytes, size_t size, hp_model** out);
HP_API void hp_model_destroy(hp_model* model);

/* One input sentence per line. log may be NULL. */
HP_API hp_status hp_predict(const hp_model* model, const hp_config* cfg, const char* input, char** output,
                            char** log);
HP_API hp_status hp_evaluate(const hp_config* cfg, const char* gold, const char* predicted, char** report);
HP_API hp_status hp_diagnose(const hp_model* model, const hp_config* cfg, const char* sentences,
                             char** report);

#ifdef __cplusplus
}
#endif

#endif
