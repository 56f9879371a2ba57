#ifndef QROTOR_H
#define QROTOR_H

#include <stddef.h>
#include <stdint.h>
#include <stdbool.h>

#define QR_REGIME_CLASSICAL 0

#define QR_REGIME_REAL 1

#define QR_REGIME_PHASE 2

#define QR_MODEL_I 0

#define QR_MODEL_I_PRIME 1

#define QR_MODEL_II 2

#define QR_MODEL_II_PRIME 3

#define QR_MODEL_III 4

#define QR_MODEL_IV 5

typedef enum QrStatus {
  QR_STATUS_OK = 0,
  QR_STATUS_NULL_POINTER = 1,
  QR_STATUS_DOMAIN = 2,
  QR_STATUS_UNSUPPORTED_REGIME = 3,
  QR_STATUS_RANGE = 4,
  QR_STATUS_DATA = 5,
  QR_STATUS_PARSE = 6,
  QR_STATUS_IO = 7,
  QR_STATUS_INVALID_ARGUMENT = 8,
  QR_STATUS_PANIC = 9,
} QrStatus;

// Opaque level dataset.
typedef struct QrDataset QrDataset;

// Opaque fit result.
typedef struct QrFit QrFit;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or NULL. The pointer
// stays valid until the next call into this library from the same thread.
const char *qr_last_error(void);

// q-number `[x]` for the given regime.
//
// # Safety
// `out` must be NULL or point to writable memory for one `double`.
enum QrStatus qr_q_number(int32_t regime, double tau, double x, double *out);

// Energy of level `ell` in `model`. `p0` is A (or a); `p1` is tau, B or b.
//
// # Safety
// `out` must be NULL or point to writable memory for one `double`.
enum QrStatus qr_energy(int32_t model_kind, double p0, double p1, uint32_t ell, double *out);

// Dataset from `ell,energy_cm1` CSV text.
//
// # Safety
// `csv` must be NULL or a NUL-terminated string; `out` must be NULL or
// point to writable storage for one pointer.
enum QrStatus qr_dataset_from_csv(const char *csv, struct QrDataset **out);

// The bundled HF ground-state levels.
//
// # Safety
// `out` must be NULL or point to writable storage for one pointer.
enum QrStatus qr_dataset_bundled_hf(struct QrDataset **out);

// Number of levels, or 0 for NULL.
//
// # Safety
// `data` must be NULL or a live handle.
uintptr_t qr_dataset_len(const struct QrDataset *data);

// # Safety
// `data` must be NULL or a handle not yet freed.
void qr_dataset_free(struct QrDataset *data);

// Least-squares fit of `model_kind` to `data`.
//
// # Safety
// `data` must be NULL or a live handle; `out` must be NULL or point to
// writable storage for one pointer.
enum QrStatus qr_fit(const struct QrDataset *data, int32_t model_kind, struct QrFit **out);

// Fitted parameters, sigma and convergence flag. Any output pointer may be NULL.
//
// # Safety
// `fit` must be NULL or a live handle; non-NULL outputs must be writable.
enum QrStatus qr_fit_summary(const struct QrFit *fit,
                             double *p0,
                             double *p1,
                             double *sigma,
                             bool *converged);

// Fit result as a JSON string, released with [`qr_string_free`].
//
// # Safety
// `fit` must be NULL or a live handle; `out` must be NULL or point to
// writable storage for one pointer.
enum QrStatus qr_fit_to_json(const struct QrFit *fit, char **out);

// # Safety
// `fit` must be NULL or a handle not yet freed.
void qr_fit_free(struct QrFit *fit);

// # Safety
// `s` must be NULL or a string returned by this library and not yet freed.
void qr_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QROTOR_H */
