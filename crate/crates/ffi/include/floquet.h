#ifndef FLOQUET_H
#define FLOQUET_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes.
typedef enum FqStatus {
  FQ_STATUS_OK = 0,
  FQ_STATUS_NULL_POINTER = 1,
  FQ_STATUS_INVALID_ARGUMENT = 2,
  FQ_STATUS_IO = 3,
  FQ_STATUS_PARSE = 4,
  FQ_STATUS_INVALID_LATTICE = 5,
  FQ_STATUS_SIMULATION = 6,
  FQ_STATUS_PANIC = 7,
} FqStatus;

// A validated edge-colored lattice.
typedef struct FqLattice FqLattice;

// A detector model of a lattice at fixed rounds and error rate.
typedef struct FqSimulator FqSimulator;

// Code parameters `[[n, k, d]]`, genus and rate `k / n`.
typedef struct FqParams {
  size_t n;
  size_t k;
  size_t d;
  size_t genus;
  double rate;
} FqParams;

// Failure counts of a batch of shots.
typedef struct FqCounts {
  uint64_t shots;
  uint64_t fails_any;
  uint64_t fails_one;
} FqCounts;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Parses a lattice from text in the lattice file format.
//
// # Safety
// `text` must be a NUL-terminated string and `out` a writable pointer.
enum FqStatus fq_lattice_parse(const char *text, struct FqLattice **out);

// Loads a lattice file.
//
// # Safety
// `path` must be a NUL-terminated string and `out` a writable pointer.
enum FqStatus fq_lattice_load(const char *path, struct FqLattice **out);

// Releases a lattice; null is ignored.
//
// # Safety
// `lattice` must come from this library and not be used afterwards.
void fq_lattice_free(struct FqLattice *lattice);

// Number of qubits (vertices) of a lattice.
//
// # Safety
// `lattice` must be a live handle and `out` a writable pointer.
enum FqStatus fq_lattice_num_qubits(const struct FqLattice *lattice, size_t *out);

// Code parameters of a lattice.
//
// # Safety
// `lattice` must be a live handle and `out` a writable pointer.
enum FqStatus fq_code_params(const struct FqLattice *lattice, struct FqParams *out);

// Builds the detector model of `lattice` over `rounds` noisy rounds at
// physical error rate `p`; `rounds = 0` selects three rounds per unit of
// distance.
//
// # Safety
// `lattice` must be a live handle and `out` a writable pointer.
enum FqStatus fq_simulator_new(const struct FqLattice *lattice,
                               size_t rounds,
                               double p,
                               struct FqSimulator **out);

// Releases a simulator; null is ignored.
//
// # Safety
// `sim` must come from this library and not be used afterwards.
void fq_simulator_free(struct FqSimulator *sim);

// Number of detectors of the model.
//
// # Safety
// `sim` must be a live handle and `out` a writable pointer.
enum FqStatus fq_simulator_num_detectors(const struct FqSimulator *sim, size_t *out);

// Samples and decodes `shots` shots with the default decoder; the counts
// depend only on the model and `seed`.
//
// # Safety
// `sim` must be a live handle and `out` a writable pointer.
enum FqStatus fq_simulator_run(const struct FqSimulator *sim,
                               uint64_t shots,
                               uint64_t seed,
                               struct FqCounts *out);

// Copies the last error message of this thread into `buf` as a
// NUL-terminated string, truncating to `len - 1` bytes. Returns the full
// message length, so a call with `len = 0` sizes the buffer.
//
// # Safety
// `buf` must be writable for `len` bytes, or null with `len = 0`.
size_t fq_last_error(char *buf, size_t len);

// Static description of a status code.
const char *fq_status_str(enum FqStatus status);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FLOQUET_H */
