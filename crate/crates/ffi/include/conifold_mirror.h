#ifndef CONIFOLD_MIRROR_H
#define CONIFOLD_MIRROR_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes.
 */
typedef enum CmStatus {
  CM_STATUS_OK = 0,
  /**
   * A check ran and found a mismatch; the report is still returned.
   */
  CM_STATUS_MISMATCH = 1,
  CM_STATUS_INVALID_PARAMS = 2,
  CM_STATUS_DEGENERATE = 3,
  CM_STATUS_UNSUPPORTED = 4,
  CM_STATUS_NULL_POINTER = 5,
  CM_STATUS_INTERNAL = 6,
  CM_STATUS_PANIC = 7,
} CmStatus;

/**
 * Knot parameters `(p, r, s)`.
 */
typedef struct CmParams CmParams;

/**
 * Outcome of one check.
 */
typedef struct CmReport CmReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread. Owned by the library.
 */
const char *cm_last_error(void);

/**
 * # Safety
 * `out` must be valid for writes.
 */
enum CmStatus cm_params_new(int64_t p, int64_t r, int64_t s, struct CmParams **out);

/**
 * # Safety
 * `params` must come from [`cm_params_new`] or be null.
 */
void cm_params_free(struct CmParams *params);

/**
 * Disk potential against the curve.
 *
 * # Safety
 * `params` must be a live handle and `out` valid for writes.
 */
enum CmStatus cm_check_disk(const struct CmParams *params,
                            uint32_t q_order,
                            uint32_t x_order,
                            struct CmReport **out);

/**
 * Both routes to the curve parametrization.
 *
 * # Safety
 * As for [`cm_check_disk`].
 */
enum CmStatus cm_check_v_routes(const struct CmParams *params,
                                uint32_t q_order,
                                uint32_t eta_order,
                                struct CmReport **out);

/**
 * Graph sum against the recursion at `q = q_num / q_den`.
 *
 * # Safety
 * As for [`cm_check_disk`].
 */
enum CmStatus cm_check_graphsum(const struct CmParams *params,
                                uint32_t g,
                                uint32_t n,
                                int64_t q_num,
                                int64_t q_den,
                                struct CmReport **out);

/**
 * # Safety
 * As for [`cm_check_disk`].
 */
enum CmStatus cm_check_rmatrix(const struct CmParams *params,
                               uint32_t z_order,
                               struct CmReport **out);

/**
 * # Safety
 * As for [`cm_check_disk`].
 */
enum CmStatus cm_check_annulus_q0(const struct CmParams *params,
                                  uint32_t o1,
                                  uint32_t o2,
                                  struct CmReport **out);

/**
 * Intersection numbers against the Airy recursion.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum CmStatus cm_check_airy(uint32_t g, uint32_t n, struct CmReport **out);

/**
 * 1 on pass, 0 on mismatch, -1 for a null handle.
 *
 * # Safety
 * `report` must be a live handle or null.
 */
int32_t cm_report_passed(const struct CmReport *report);

/**
 * JSON of the report; release with [`cm_string_free`]. Null for a null handle.
 *
 * # Safety
 * `report` must be a live handle or null.
 */
char *cm_report_json(const struct CmReport *report);

/**
 * # Safety
 * `report` must come from a check function or be null.
 */
void cm_report_free(struct CmReport *report);

/**
 * # Safety
 * `s` must come from [`cm_report_json`] or be null.
 */
void cm_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CONIFOLD_MIRROR_H */
