#ifndef INDEXRADIX_H
#define INDEXRADIX_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum IrStatus {
  IR_STATUS_OK = 0,
  IR_STATUS_NULL_POINTER = 1,
  IR_STATUS_INVALID_UTF8 = 2,
  IR_STATUS_PARSE = 3,
  IR_STATUS_INVALID_INDEX_LIST = 4,
  IR_STATUS_INDEX_OVERFLOW = 5,
  IR_STATUS_MAX_CPU_EXCEEDED = 6,
  IR_STATUS_BUFFER_TOO_SMALL = 7,
  IR_STATUS_WORKER_FAILED = 8,
  IR_STATUS_INTERNAL = 9,
} IrStatus;

/*
 Opaque handle to a canonical index list.
 */
typedef struct IrIndexList IrIndexList;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Static description of a status code. Never NULL; do not free.
 */
const char *ir_status_message(enum IrStatus status);

/*
 Parses a decimal or `0x` hex integer and stores its index list in `*out`.

 # Safety
 `number` must be NUL-terminated; `out` must be writable.
 */
enum IrStatus ir_index_list_from_string(const char *number, struct IrIndexList **out);

/*
 Builds a handle from `len` strictly decreasing indices.

 # Safety
 `indices` must point to `len` readable values (may be NULL when `len` is 0).
 */
enum IrStatus ir_index_list_from_indices(const uint64_t *indices,
                                         size_t len,
                                         struct IrIndexList **out);

/*
 Number of indices (the popcount of the value). 0 for a NULL handle.

 # Safety
 `list` must be NULL or a live handle.
 */
size_t ir_index_list_len(const struct IrIndexList *list);

/*
 Copies the indices, most significant first, into `buf`. `*written`
 receives the list length even when `cap` is too small.

 # Safety
 `buf` must have room for `cap` values; `written` must be writable.
 */
enum IrStatus ir_index_list_copy(const struct IrIndexList *list,
                                 uint64_t *buf,
                                 size_t cap,
                                 size_t *written);

/*
 # Safety
 `list` must be NULL or a handle not yet freed.
 */
void ir_index_list_free(struct IrIndexList *list);

/*
 Decimal value of a handle.

 # Safety
 `list` must be a live handle; `out` must be writable.
 */
enum IrStatus ir_reconstruct(const struct IrIndexList *list, char **out);

/*
 # Safety
 `a` and `b` must be live handles; `out` must be writable.
 */
enum IrStatus ir_add(const struct IrIndexList *a,
                     const struct IrIndexList *b,
                     struct IrIndexList **out);

/*
 # Safety
 `a` and `b` must be live handles; `out` must be writable.
 */
enum IrStatus ir_multiply(const struct IrIndexList *a,
                          const struct IrIndexList *b,
                          struct IrIndexList **out);

/*
 Product of two integer strings, as a decimal string.

 # Safety
 `a` and `b` must be NUL-terminated; `out` must be writable.
 */
enum IrStatus ir_multiply_strings(const char *a, const char *b, char **out);

/*
 Partitioned parallel product of two integer strings, as a decimal
 string. Fails with `IR_STATUS_MAX_CPU_EXCEEDED` when the partitioning
 needs more than `max_cpu` tasks.

 # Safety
 `a` and `b` must be NUL-terminated; `out` must be writable.
 */
enum IrStatus ir_parallel_multiply(const char *a,
                                   const char *b,
                                   size_t partitions_a,
                                   size_t partitions_b,
                                   size_t max_cpu,
                                   char **out);

/*
 # Safety
 `s` must be NULL or a string returned by this library, not yet freed.
 */
void ir_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* INDEXRADIX_H */
