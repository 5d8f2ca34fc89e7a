#ifndef STARTFLOW_H
#define STARTFLOW_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

// Result code of every fallible call.
typedef enum SfStatus {
  SF_STATUS_OK = 0,
  SF_STATUS_NULL_ARGUMENT = 1,
  SF_STATUS_INVALID_UTF8 = 2,
  // The document has syntax errors; see `sf_last_error`.
  SF_STATUS_PARSE_ERROR = 3,
  // A named feature or task does not exist.
  SF_STATUS_NOT_FOUND = 4,
  // Input is well-formed but rejected (bad config, broken task path,
  // malformed CSV, empty group).
  SF_STATUS_INVALID = 5,
  // An internal failure was caught at the boundary.
  SF_STATUS_INTERNAL = 6,
} SfStatus;

// Parsed project. Opaque to C.
typedef struct SfProject SfProject;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Parses `source` into a new project handle stored in `*out`.
//
// # Safety
// `source` must be a NUL-terminated string and `out` a valid pointer.
enum SfStatus sf_project_parse(const char *source, struct SfProject **out);

// Releases a project handle. Null is ignored.
//
// # Safety
// `project` must come from `sf_project_parse` and not be used afterwards.
void sf_project_free(struct SfProject *project);

// Canonical source text of the project.
//
// # Safety
// `project` must be a live handle and `out` a valid pointer.
enum SfStatus sf_project_format(const struct SfProject *project, char **out);

// Lints the project and writes the JSON defect report to `*out`.
// `config_json` may be null to use the project's own configuration.
//
// # Safety
// `project` must be a live handle, `config_json` null or a
// NUL-terminated string, and `out` a valid pointer.
enum SfStatus sf_project_check(const struct SfProject *project,
                               const char *config_json,
                               char **out);

// Graphviz DOT for the whole project, or one feature when `feature` is
// not null.
//
// # Safety
// `project` must be a live handle, `feature` null or a NUL-terminated
// string, and `out` a valid pointer.
enum SfStatus sf_project_dot(const struct SfProject *project, const char *feature, char **out);

// Number of trigger activations in the named task.
//
// # Safety
// `project` must be a live handle, `task` a NUL-terminated string and
// `out` a valid pointer.
enum SfStatus sf_project_action_count(const struct SfProject *project,
                                      const char *task,
                                      uintptr_t *out);

// Per-feature metrics table as JSON.
//
// # Safety
// `project` must be a live handle and `out` a valid pointer.
enum SfStatus sf_project_metrics(const struct SfProject *project, bool forward_only, char **out);

// Summarizes defect-form CSV text for one group as JSON.
//
// # Safety
// `csv` and `group` must be NUL-terminated strings and `out` a valid
// pointer.
enum SfStatus sf_eval_summarize_csv(const char *csv, const char *group, char **out);

// Summarizes TAM questionnaire CSV text for one group as JSON.
//
// # Safety
// `csv` and `group` must be NUL-terminated strings and `out` a valid
// pointer.
enum SfStatus sf_tam_summarize_csv(const char *csv, const char *group, char **out);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not be used afterwards.
void sf_string_free(char *s);

// Message for the last failed call on this thread, or null. The pointer
// stays valid until the next call into this library on the same thread.
const char *sf_last_error(void);

// Library version, a static string.
const char *sf_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* STARTFLOW_H */
