#ifndef GREYRANK_H
#define GREYRANK_H

/* Generated by cbindgen from the greyrank-ffi crate. Do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Output shape for `greyrank_report_render`.
 */
typedef enum GreyrankFormat {
  GreyrankFormat_PlainTable = 0,
  GreyrankFormat_CommaSeparated = 1,
  GreyrankFormat_StructuredObject = 2,
} GreyrankFormat;

/**
 * Influence class of a grade.
 */
typedef enum GreyrankInfluence {
  GreyrankInfluence_Marked = 0,
  GreyrankInfluence_RelativelyMarked = 1,
  GreyrankInfluence_Noticeable = 2,
  GreyrankInfluence_Weak = 3,
  GreyrankInfluence_Negligible = 4,
} GreyrankInfluence;

/**
 * Result of every fallible call. Anything but `Ok` leaves a message in
 * `greyrank_last_error_message`.
 */
typedef enum GreyrankStatus {
  GreyrankStatus_Ok = 0,
  /**
   * A required pointer argument was null.
   */
  GreyrankStatus_NullArgument = 1,
  /**
   * An argument was not valid UTF-8.
   */
  GreyrankStatus_InvalidUtf8 = 2,
  /**
   * Reading or writing a file failed.
   */
  GreyrankStatus_Io = 3,
  /**
   * The configuration file was rejected.
   */
  GreyrankStatus_InvalidConfig = 4,
  /**
   * The pipeline rejected the data; the message names the stage.
   */
  GreyrankStatus_DataError = 5,
  /**
   * An index argument was out of range.
   */
  GreyrankStatus_IndexOutOfRange = 6,
  /**
   * The report document could not be parsed.
   */
  GreyrankStatus_ParseError = 7,
} GreyrankStatus;

/**
 * Opaque analysis result handle.
 */
typedef struct GreyrankReport GreyrankReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread, or null after a
 * success. The pointer is valid until the next call on the same thread.
 */
const char *greyrank_last_error_message(void);

/**
 * Crate version as a static NUL-terminated string.
 */
const char *greyrank_version(void);

/**
 * Run the full analysis over a records file, an optional traffic file and an
 * optional configuration file. On success `*out_report` owns the result.
 *
 * # Safety
 * Pointer arguments must be NUL-terminated strings or null where optional;
 * `out_report` must point to writable storage.
 */
enum GreyrankStatus greyrank_analyze_files(const char *records_path,
                                           const char *traffic_path,
                                           const char *config_path,
                                           struct GreyrankReport **out_report);

/**
 * Parse a report previously rendered as a structured (JSON) document.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out_report` must be writable.
 */
enum GreyrankStatus greyrank_report_from_json(const char *json, struct GreyrankReport **out_report);

/**
 * Render a report; `*out_text` receives a caller-owned string.
 *
 * # Safety
 * `report` must be a live handle from this library; `out_text` writable.
 */
enum GreyrankStatus greyrank_report_render(const struct GreyrankReport *report,
                                           enum GreyrankFormat format,
                                           char **out_text);

/**
 * Number of ranked feature rows.
 *
 * # Safety
 * `report` must be a live handle from this library.
 */
size_t greyrank_report_feature_count(const struct GreyrankReport *report);

/**
 * Number of group rows.
 *
 * # Safety
 * `report` must be a live handle from this library.
 */
size_t greyrank_report_group_count(const struct GreyrankReport *report);

/**
 * Feature id at `index` (rank order); caller owns `*out_name`.
 *
 * # Safety
 * `report` must be a live handle; `out_name` writable.
 */
enum GreyrankStatus greyrank_report_feature_name(const struct GreyrankReport *report,
                                                 size_t index,
                                                 char **out_name);

/**
 * Grade of the feature at `index`.
 *
 * # Safety
 * `report` must be a live handle; `out_grade` writable.
 */
enum GreyrankStatus greyrank_report_feature_grade(const struct GreyrankReport *report,
                                                  size_t index,
                                                  double *out_grade);

/**
 * 1-based rank of the feature at `index`.
 *
 * # Safety
 * `report` must be a live handle; `out_rank` writable.
 */
enum GreyrankStatus greyrank_report_feature_rank(const struct GreyrankReport *report,
                                                 size_t index,
                                                 size_t *out_rank);

/**
 * Influence class of the feature at `index`.
 *
 * # Safety
 * `report` must be a live handle; `out_class` writable.
 */
enum GreyrankStatus greyrank_report_feature_class(const struct GreyrankReport *report,
                                                  size_t index,
                                                  enum GreyrankInfluence *out_class);

/**
 * Group name at `index` (grade order); caller owns `*out_name`.
 *
 * # Safety
 * `report` must be a live handle; `out_name` writable.
 */
enum GreyrankStatus greyrank_report_group_name(const struct GreyrankReport *report,
                                               size_t index,
                                               char **out_name);

/**
 * Grade of the group at `index`.
 *
 * # Safety
 * `report` must be a live handle; `out_grade` writable.
 */
enum GreyrankStatus greyrank_report_group_grade(const struct GreyrankReport *report,
                                                size_t index,
                                                double *out_grade);

/**
 * Whether the report carries a control-series grade.
 *
 * # Safety
 * `report` must be a live handle from this library.
 */
bool greyrank_report_has_control(const struct GreyrankReport *report);

/**
 * Grade of the control series, when present.
 *
 * # Safety
 * `report` must be a live handle; `out_grade` writable.
 */
enum GreyrankStatus greyrank_report_control_grade(const struct GreyrankReport *report,
                                                  double *out_grade);

/**
 * Generate a synthetic corpus into `out_path`. `config_path` may be null for
 * the default spec; `seed_override` may be null to keep the spec seed.
 *
 * # Safety
 * Pointer arguments must be NUL-terminated strings or null where optional.
 */
enum GreyrankStatus greyrank_synth_generate(const char *config_path,
                                            const char *out_path,
                                            const uint64_t *seed_override);

/**
 * Release a report handle. Null is a no-op.
 *
 * # Safety
 * `report` must have come from this library and not been freed before.
 */
void greyrank_report_free(struct GreyrankReport *report);

/**
 * Release a string produced by this library. Null is a no-op.
 *
 * # Safety
 * `text` must have come from this library and not been freed before.
 */
void greyrank_string_free(char *text);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* GREYRANK_H */
