#ifndef RWPSO_H
#define RWPSO_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define RWPSO_MODE_RWPSO 0

#define RWPSO_MODE_BASELINE 1

#define RWPSO_DECODER_CHEAPEST_INSERTION 0

#define RWPSO_DECODER_FIRST_FEASIBLE 1

#define RWPSO_DECODER_NEAREST_REFERENCE 2

/*
 Status codes returned by every fallible function.
 */
typedef enum RwpsoStatus {
  RWPSO_STATUS_OK = 0,
  RWPSO_STATUS_NULL_POINTER = 1,
  RWPSO_STATUS_INVALID_UTF8 = 2,
  RWPSO_STATUS_IO = 3,
  RWPSO_STATUS_PARSE = 4,
  RWPSO_STATUS_CONFIG = 5,
  RWPSO_STATUS_INFEASIBLE = 6,
  RWPSO_STATUS_PANIC = 7,
} RwpsoStatus;

/*
 A loaded problem instance.
 */
typedef struct RwpsoInstance RwpsoInstance;

/*
 The outcome of one solver run.
 */
typedef struct RwpsoResult RwpsoResult;

/*
 Solver settings. Obtain defaults from [`rwpso_config_default`].
 */
typedef struct RwpsoConfig {
  uint64_t seed;
  /*
   One of the `RWPSO_MODE_*` constants.
   */
  uint32_t mode;
  /*
   One of the `RWPSO_DECODER_*` constants.
   */
  uint32_t decoder;
  size_t particles;
  /*
   Archive size L.
   */
  size_t archive_size;
  /*
   Iteration count; 0 selects 1000 up to 25 customers and 10000 beyond.
   */
  size_t iterations;
  double k_vmax;
  double time_cost;
} RwpsoConfig;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message for the most recent failure on this thread, or null if none.
 The pointer stays valid until the next failing call on the same thread.
 */
const char *rwpso_last_error(void);

struct RwpsoConfig rwpso_config_default(void);

/*
 Loads a Solomon file. `customers` = 0 keeps every customer.

 # Safety
 `path` must be a nul-terminated string and `out` a valid pointer.
 */
enum RwpsoStatus rwpso_instance_load(const char *path,
                                     size_t customers,
                                     struct RwpsoInstance **out);

/*
 Parses Solomon-format text. `customers` = 0 keeps every customer.

 # Safety
 `text` must be a nul-terminated string and `out` a valid pointer.
 */
enum RwpsoStatus rwpso_instance_parse(const char *text,
                                      size_t customers,
                                      struct RwpsoInstance **out);

/*
 # Safety
 `instance` must come from this library and not be used afterwards.
 */
void rwpso_instance_free(struct RwpsoInstance *instance);

/*
 Number of customers, or 0 for a null handle.

 # Safety
 `instance` must be null or a live handle.
 */
size_t rwpso_instance_customers(const struct RwpsoInstance *instance);

/*
 Vehicle capacity, or 0 for a null handle.

 # Safety
 `instance` must be null or a live handle.
 */
double rwpso_instance_capacity(const struct RwpsoInstance *instance);

/*
 Runs the optimizer. A null `config` uses [`rwpso_config_default`].

 # Safety
 `instance` must be a live handle, `config` null or valid, `out` valid.
 */
enum RwpsoStatus rwpso_solve(const struct RwpsoInstance *instance,
                             const struct RwpsoConfig *config,
                             struct RwpsoResult **out);

/*
 # Safety
 `result` must come from this library and not be used afterwards.
 */
void rwpso_result_free(struct RwpsoResult *result);

/*
 # Safety
 `result` must be null or a live handle.
 */
size_t rwpso_result_vehicles(const struct RwpsoResult *result);

/*
 # Safety
 `result` must be null or a live handle.
 */
double rwpso_result_distance(const struct RwpsoResult *result);

/*
 # Safety
 `result` must be null or a live handle.
 */
double rwpso_result_cost(const struct RwpsoResult *result);

/*
 # Safety
 `result` must be null or a live handle.
 */
size_t rwpso_result_route_count(const struct RwpsoResult *result);

/*
 Borrows the customer ids of route `index`. The array lives as long as
 `result`.

 # Safety
 `result` must be a live handle; `stops` and `len` must be valid pointers.
 */
enum RwpsoStatus rwpso_result_route(const struct RwpsoResult *result,
                                    size_t index,
                                    const size_t **stops,
                                    size_t *len);

/*
 The run as a JSON solution document, or null on failure. Release with
 [`rwpso_string_free`].

 # Safety
 `result` must be null or a live handle.
 */
char *rwpso_result_to_json(const struct RwpsoResult *result);

/*
 # Safety
 `s` must be null or a string returned by this library.
 */
void rwpso_string_free(char *s);

/*
 Checks a JSON solution document against `instance`. On success writes
 the vehicle count and total distance when the pointers are non-null.

 # Safety
 `instance` must be a live handle and `solution_json` a nul-terminated
 string; `nv` and `td` may be null.
 */
enum RwpsoStatus rwpso_validate(const struct RwpsoInstance *instance,
                                const char *solution_json,
                                size_t *nv,
                                double *td);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RWPSO_H */
