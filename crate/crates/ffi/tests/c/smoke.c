#include <math.h>
#include <stdio.h>
#include <stdlib.h>

#include "melcert.h"

static int check(MelcertStatus got, MelcertStatus want, const char *what) {
    if (got != want) {
        const char *msg = melcert_last_error_message();
        fprintf(stderr, "%s: status %d, expected %d (%s)\n", what, (int)got, (int)want, msg ? msg : "");
        return 1;
    }
    return 0;
}

int main(void) {
    MelcertFamily *family = NULL;
    MelcertReport *report = NULL;
    int failures = 0;

    failures += check(melcert_family_for_dimension(5, &family), MELCERT_STATUS_UNSUPPORTED_DIMENSION, "d=5");
    failures += check(melcert_family_for_dimension(4, &family), MELCERT_STATUS_OK, "d=4");
    failures += check(melcert_certify(family, 1e-9, MELCERT_CONVENTION_BOTH, &report), MELCERT_STATUS_OK, "certify");

    double bound = melcert_report_bound(report);
    if (fabs(bound - 0.875) > 1e-12 || !melcert_report_certified(report)) {
        fprintf(stderr, "unexpected bound %.17g\n", bound);
        failures++;
    }
    size_t count = melcert_report_margin_count(report);
    double *margins = malloc(count * sizeof(double));
    failures += check(melcert_report_margins(report, margins, count), MELCERT_STATUS_OK, "margins");
    for (size_t i = 0; i < count; i++) {
        if (margins[i] < -1e-10) failures++;
    }
    free(margins);

    char *json = NULL;
    failures += check(melcert_report_to_json(report, &json), MELCERT_STATUS_OK, "report json");
    melcert_string_free(json);
    melcert_report_free(report);
    melcert_family_free(family);

    printf("melcert %s: d=4 bound %.6f, %d failures\n", melcert_version(), bound, failures);
    return failures == 0 ? 0 : 1;
}
