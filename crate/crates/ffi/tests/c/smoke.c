#include <math.h>
#include <stdio.h>
#include <string.h>
#include "regpet.h"

#define CHECK(x) do { if (!(x)) { fprintf(stderr, "failed: %s (%s)\n", #x, regpet_last_error() ? regpet_last_error() : ""); return 1; } } while (0)

int main(void) {
    RegpetSeries *f1 = NULL;
    CHECK(regpet_series_faber(1, 60, &f1) == REGPET_STATUS_OK);
    double re = 0, im = 0, err = 0;
    CHECK(regpet_inner_product(f1, f1, &re, &im, &err) == REGPET_STATUS_OK);
    CHECK(fabs(re - 205.499979035041) < 1e-8);

    double c = 0;
    CHECK(regpet_series_coeff(f1, 1, &c) == REGPET_STATUS_OK && c == 196884.0);

    char *json = NULL;
    CHECK(regpet_series_to_json(f1, &json) == REGPET_STATUS_OK);
    RegpetSeries *back = NULL;
    CHECK(regpet_series_from_json(json, &back) == REGPET_STATUS_OK);
    regpet_string_free(json);

    RegpetSeries *bad = NULL;
    CHECK(regpet_series_faber(0, 60, &bad) != REGPET_STATUS_OK && bad == NULL);
    CHECK(regpet_last_error() != NULL);
    CHECK(regpet_series_eval(NULL, 0.0, 1.0, &re, &im) == REGPET_STATUS_NULL_POINTER);

    regpet_series_free(back);
    regpet_series_free(f1);
    printf("ok\n");
    return 0;
}
