/* Generated by cbindgen; do not edit. */

#ifndef NCP_H
#define NCP_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum NcpStatus {
  NCP_STATUS_OK = 0,
  // The call succeeded but the property asked about does not hold.
  NCP_STATUS_PROPERTY_FAILS = 1,
  NCP_STATUS_INVALID_INPUT = 2,
  NCP_STATUS_RESOURCE_CAP = 3,
  NCP_STATUS_NULL_POINTER = 4,
  NCP_STATUS_BUFFER_TOO_SMALL = 5,
  NCP_STATUS_INTERNAL = 6,
} NcpStatus;

typedef enum NcpFamily {
  // Symmetric groups, `d` must be 1.
  NCP_FAMILY_G11N = 0,
  NCP_FAMILY_GDDN = 1,
} NcpFamily;

typedef enum NcpTieBreak {
  NCP_TIE_BREAK_SMALLEST_INDEX = 0,
  NCP_TIE_BREAK_LARGEST_INDEX = 1,
} NcpTieBreak;

// Noncrossing partition lattice of a well-generated group.
typedef struct NcpLattice NcpLattice;

// Finite graded poset.
typedef struct NcpPoset NcpPoset;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or null. Valid until the next call.
const char *ncp_last_error(void);

// Builds `NC(W)` for `W = G(1,1,n)` or `G(d,d,n)`. `cap` of 0 uses the default element cap.
//
// # Safety
// `out` must be a valid pointer.
enum NcpStatus ncp_lattice_build(enum NcpFamily family,
                                 uint32_t d,
                                 uint32_t n,
                                 size_t cap,
                                 struct NcpLattice **out);

// # Safety
// `lattice` must be null or a handle from `ncp_lattice_build` not yet freed.
void ncp_lattice_free(struct NcpLattice *lattice);

// # Safety
// Pointers must be valid.
enum NcpStatus ncp_lattice_size(const struct NcpLattice *lattice, size_t *out);

// # Safety
// Pointers must be valid; `buf` may be null to query the length.
enum NcpStatus ncp_lattice_rank_vector(const struct NcpLattice *lattice,
                                       uint64_t *buf,
                                       size_t cap,
                                       size_t *out_len);

// Builds the symmetric Boolean decomposition, verifies it and reports the number of
// parts of each rank span `0..=rank/2` (the gamma vector).
//
// # Safety
// Pointers must be valid; `buf` may be null to query the length.
enum NcpStatus ncp_lattice_sbd_gamma(const struct NcpLattice *lattice,
                                     int64_t *buf,
                                     size_t cap,
                                     size_t *out_len);

// # Safety
// Pointers must be valid.
enum NcpStatus ncp_lattice_to_poset(const struct NcpLattice *lattice, struct NcpPoset **out);

// Reads a poset file.
//
// # Safety
// `path` must be a NUL-terminated string and `out` a valid pointer.
enum NcpStatus ncp_poset_import(const char *path, struct NcpPoset **out);

// # Safety
// `poset` must be a valid handle and `path` a NUL-terminated string.
enum NcpStatus ncp_poset_export(const struct NcpPoset *poset, const char *path);

// # Safety
// `poset` must be null or a live handle.
void ncp_poset_free(struct NcpPoset *poset);

// # Safety
// Pointers must be valid.
enum NcpStatus ncp_poset_size(const struct NcpPoset *poset, size_t *out);

// Largest antichain.
//
// # Safety
// Pointers must be valid.
enum NcpStatus ncp_poset_width(const struct NcpPoset *poset, size_t *out);

// `NCP_STATUS_OK` if strongly Sperner, `NCP_STATUS_PROPERTY_FAILS` if not.
//
// # Safety
// `poset` must be a valid handle.
enum NcpStatus ncp_poset_strongly_sperner(const struct NcpPoset *poset, enum NcpTieBreak tie);

// `NCP_STATUS_OK` if every pair of consecutive ranks has the normalized matching property.
//
// # Safety
// `poset` must be a valid handle.
enum NcpStatus ncp_poset_normalized_matching(const struct NcpPoset *poset);

// Gamma vector of the rank sequence. Fails with `NCP_STATUS_INVALID_INPUT` if the
// poset is not graded or its rank sequence is not symmetric.
//
// # Safety
// Pointers must be valid; `buf` may be null to query the length.
enum NcpStatus ncp_poset_gamma(const struct NcpPoset *poset,
                               int64_t *buf,
                               size_t cap,
                               size_t *out_len);

// Checks that the poset's own rank profile is compatible with a symmetric Boolean
// decomposition read from `path`.
//
// # Safety
// `poset` must be a valid handle and `path` a NUL-terminated string.
enum NcpStatus ncp_poset_verify_sbd(const struct NcpPoset *poset, const char *path);

// Catalan number of the group. `NCP_STATUS_RESOURCE_CAP` if it does not fit in 64 bits.
//
// # Safety
// `out` must be a valid pointer.
enum NcpStatus ncp_catalan(enum NcpFamily family, uint32_t d, uint32_t n, uint64_t *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NCP_H */
