#include <stdio.h>
#include <string.h>

#include "sumset.h"

#define CHECK(cond)                                              \
    do {                                                         \
        if (!(cond)) {                                           \
            fprintf(stderr, "%s:%d: %s\n", __FILE__, __LINE__, #cond); \
            return 1;                                            \
        }                                                        \
    } while (0)

int main(void) {
    const int64_t values[] = {1, 2, 3, 4, 5};
    SumsetSet *set = NULL;
    CHECK(sumset_set_new(values, 5, &set) == SUMSET_STATUS_OK);

    uint64_t count = 0;
    CHECK(sumset_ksum_count(set, 2, &count) == SUMSET_STATUS_OK);
    CHECK(count == 7);

    SumsetRatioVerdict v;
    CHECK(sumset_ratio_check(set, 1, &v) == SUMSET_STATUS_OK);
    CHECK(v.size_k == 5 && v.size_k1 == 7 && v.holds);

    SumsetVerification *report = NULL;
    CHECK(sumset_verify_chain(set, 2, &report) == SUMSET_STATUS_OK);
    CHECK(sumset_verification_chain_holds(report));
    char *json = sumset_verification_to_json(report);
    CHECK(json != NULL && strstr(json, "\"checks\"") != NULL);
    sumset_string_free(json);
    sumset_verification_free(report);

    CHECK(sumset_ksum_count(set, 9, &count) == SUMSET_STATUS_INVALID_INPUT);
    CHECK(sumset_last_error() != NULL);
    sumset_set_free(set);

    printf("ok %s\n", sumset_version());
    return 0;
}
