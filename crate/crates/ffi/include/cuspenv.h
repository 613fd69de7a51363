#ifndef CUSPENV_H
#define CUSPENV_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum CuspenvStatus {
  CUSPENV_STATUS_OK = 0,
  CUSPENV_STATUS_NULL_ARGUMENT = 1,
  CUSPENV_STATUS_INVALID_UTF8 = 2,
  CUSPENV_STATUS_PARSE = 3,
  // The input parsed but is not a plain germ (a CTF record, say).
  CUSPENV_STATUS_WRONG_KIND = 4,
  CUSPENV_STATUS_COMPUTATION = 5,
  // A Rust panic was caught at the boundary.
  CUSPENV_STATUS_INTERNAL = 6,
} CuspenvStatus;

// A parsed germ, family or CTF record.
typedef struct CuspenvGerm CuspenvGerm;

// Captured output of a command-line invocation.
typedef struct CuspenvOutput CuspenvOutput;

typedef struct CuspenvDeterminacy {
  bool certified;
  // Certified determinacy order `k + l`.
  uint32_t order;
} CuspenvDeterminacy;

typedef struct CuspenvCodim {
  uint32_t codim;
  // False when `codim` is only a lower bound.
  bool conclusive;
} CuspenvCodim;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static string.
const char *cuspenv_version(void);

// Message for the most recent failure on this thread, or NULL. The pointer
// is valid until the next library call on the same thread.
const char *cuspenv_last_error(void);

// Parses germ, family or CTF syntax at working order `order`.
//
// # Safety
// `source` must be a valid NUL-terminated string and `out` a writable pointer.
enum CuspenvStatus cuspenv_germ_parse(const char *source, uint32_t order, struct CuspenvGerm **out);

// # Safety
// `germ` must be NULL or a handle from [`cuspenv_germ_parse`] not yet freed.
void cuspenv_germ_free(struct CuspenvGerm *germ);

// Canonical re-printing of the parsed input.
//
// # Safety
// `germ` must be a live handle and `out` a writable pointer.
enum CuspenvStatus cuspenv_germ_canonical(const struct CuspenvGerm *germ, char **out);

// Determinacy certificate with filtration indices `k` and `l`. When
// `determinant` is not NULL it receives the determinant of the second rank
// test as a string (empty if there is none).
//
// # Safety
// `germ` must be a live handle; `out` writable; `determinant` NULL or writable.
enum CuspenvStatus cuspenv_germ_determinacy(const struct CuspenvGerm *germ,
                                            uint32_t k,
                                            uint32_t l,
                                            struct CuspenvDeterminacy *out,
                                            char **determinant);

// Extended codimension with tangent spaces truncated at degree `cap`.
//
// # Safety
// `germ` must be a live handle and `out` writable.
enum CuspenvStatus cuspenv_germ_codim(const struct CuspenvGerm *germ,
                                      uint32_t cap,
                                      struct CuspenvCodim *out);

// Envelope branch tags, comma separated (e.g. `semicubic-cusp,regular`).
//
// # Safety
// `germ` must be a live handle and `out` writable.
enum CuspenvStatus cuspenv_germ_envelope_tags(const struct CuspenvGerm *germ, char **out);

// Runs the command-line tool in process. `argv` excludes the program name.
// A non-zero exit status of the command is not a failure of this call.
//
// # Safety
// `argv` must point to `argc` valid strings; `out` must be writable.
enum CuspenvStatus cuspenv_run(size_t argc, const char *const *argv, struct CuspenvOutput **out);

// Standard output of the run; owned by `output`.
//
// # Safety
// `output` must be NULL or a live handle.
const char *cuspenv_output_stdout(const struct CuspenvOutput *output);

// Standard error of the run; owned by `output`.
//
// # Safety
// `output` must be NULL or a live handle.
const char *cuspenv_output_stderr(const struct CuspenvOutput *output);

// Exit status: 0 positive, 2 negative verdict, 1 error; -1 for NULL.
//
// # Safety
// `output` must be NULL or a live handle.
int32_t cuspenv_output_code(const struct CuspenvOutput *output);

// # Safety
// `output` must be NULL or a handle from [`cuspenv_run`] not yet freed.
void cuspenv_output_free(struct CuspenvOutput *output);

// # Safety
// `s` must be NULL or a string returned by this library, not yet freed.
void cuspenv_string_free(char *s);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* CUSPENV_H */
