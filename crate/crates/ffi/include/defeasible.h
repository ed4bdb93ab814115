#ifndef DEFEASIBLE_H
#define DEFEASIBLE_H

#include <stdbool.h>
#include <stdint.h>

/*
 Result codes shared by every entry point.
 */
typedef enum DlStatus {
  DL_STATUS_OK = 0,
  DL_STATUS_NULL_ARGUMENT = 1,
  DL_STATUS_INVALID_UTF8 = 2,
  DL_STATUS_PARSE_ERROR = 3,
  DL_STATUS_INVALID_THEORY = 4,
  DL_STATUS_UNKNOWN_TAG = 5,
  DL_STATUS_UNKNOWN_TRANSFORM = 6,
  DL_STATUS_LABEL_CLASH = 7,
  DL_STATUS_INTERNAL = 8,
} DlStatus;

/*
 The conclusions of a theory for a set of tags.
 */
typedef struct DlConclusions DlConclusions;

/*
 A parsed theory.
 */
typedef struct DlTheory DlTheory;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Parses `text` into a new theory. `loose` admits `$` names, as produced by
 transformations. Structural violations are rejected.

 # Safety
 `text` must be a NUL-terminated string and `out` a writable pointer.
 */
enum DlStatus dl_theory_parse(const char *text, bool loose, struct DlTheory **out);

/*
 Releases a theory. Null is ignored.

 # Safety
 `theory` must come from this library and not be used afterwards.
 */
void dl_theory_free(struct DlTheory *theory);

/*
 Writes the canonical text of `theory` to `*out`.

 # Safety
 `theory` must be a live handle and `out` a writable pointer.
 */
enum DlStatus dl_theory_print(const struct DlTheory *theory, char **out);

/*
 Applies the transformation named `kind` (either spelling, e.g.
 `block-for-prop` or `def2`) and returns a new theory.

 # Safety
 `theory` must be a live handle, `kind` a NUL-terminated string and `out`
 a writable pointer.
 */
enum DlStatus dl_theory_transform(const struct DlTheory *theory,
                                  const char *kind,
                                  struct DlTheory **out);

/*
 Returns the union of two label-disjoint theories.

 # Safety
 Both handles must be live and `out` a writable pointer.
 */
enum DlStatus dl_theory_add(const struct DlTheory *base,
                            const struct DlTheory *addition,
                            struct DlTheory **out);

/*
 Computes the least fixpoint for the comma separated `tags` (null means
 every tag). The result keeps only the requested tags.

 # Safety
 `theory` must be a live handle, `tags` null or a NUL-terminated string,
 and `out` a writable pointer.
 */
enum DlStatus dl_infer(const struct DlTheory *theory, const char *tags, struct DlConclusions **out);

/*
 Sets `*holds` to 1 when `conclusion` (e.g. `"+pd* q"`) is in the set and
 to 0 otherwise.

 # Safety
 `set` must be a live handle, `conclusion` a NUL-terminated string and
 `holds` a writable pointer.
 */
enum DlStatus dl_conclusions_contains(const struct DlConclusions *set,
                                      const char *conclusion,
                                      int32_t *holds);

/*
 Writes the sorted conclusion lines to `*out`.

 # Safety
 `set` must be a live handle and `out` a writable pointer.
 */
enum DlStatus dl_conclusions_format(const struct DlConclusions *set, char **out);

/*
 Releases a conclusion set. Null is ignored.

 # Safety
 `set` must come from this library and not be used afterwards.
 */
void dl_conclusions_free(struct DlConclusions *set);

/*
 Releases a string returned by this library. Null is ignored.

 # Safety
 `s` must come from this library and not be used afterwards.
 */
void dl_string_free(char *s);

/*
 The message for the last failure on this thread, or null. The pointer
 stays valid until the next failing call on the same thread.
 */
const char *dl_last_error(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DEFEASIBLE_H */
