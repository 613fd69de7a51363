#include <stdio.h>
#include <string.h>
#include "cuspenv.h"

#define CHECK(cond)                                              \
  do {                                                           \
    if (!(cond)) {                                               \
      fprintf(stderr, "check failed at line %d: %s\n", __LINE__, \
              #cond);                                            \
      return 1;                                                  \
    }                                                            \
  } while (0)

int main(void) {
  CuspenvGerm *germ = NULL;
  CHECK(cuspenv_germ_parse("param d; x^2 + y^2 + d*y^3 ; y^2 + x^3", 8, &germ) ==
        CUSPENV_STATUS_OK);

  CuspenvDeterminacy det;
  char *determinant = NULL;
  CHECK(cuspenv_germ_determinacy(germ, 2, 2, &det, &determinant) == CUSPENV_STATUS_OK);
  CHECK(det.certified && det.order == 4);
  CHECK(strcmp(determinant, "1280*d") == 0);
  cuspenv_string_free(determinant);
  cuspenv_germ_free(germ);

  CuspenvGerm *bad = NULL;
  CHECK(cuspenv_germ_parse("x^2 + 1 ; y", 8, &bad) == CUSPENV_STATUS_PARSE);
  CHECK(bad == NULL);
  CHECK(strstr(cuspenv_last_error(), "position 0") != NULL);

  const char *argv[] = {"envelope", "--germ", "x^2 + y^2 + y^3 ; y^2 + x^3"};
  CuspenvOutput *out = NULL;
  CHECK(cuspenv_run(3, argv, &out) == CUSPENV_STATUS_OK);
  CHECK(cuspenv_output_code(out) == 0);
  CHECK(strstr(cuspenv_output_stdout(out), "semicubic-cusp") != NULL);
  cuspenv_output_free(out);

  printf("ok %s\n", cuspenv_version());
  return 0;
}
