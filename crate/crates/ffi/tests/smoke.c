#include <stdio.h>
#include <string.h>
#include "cylinderlab.h"

int main(void) {
    int64_t values[27] = {0};
    for (int i = 0; i < 27; i += 3) values[i] = 1; /* plane z = 0 */
    ClWeight *w = NULL;
    if (cl_weight_new(3, values, 27, &w) != CL_STATUS_OK) return 1;
    if (cl_weight_is_p_divisible(w) != CL_STATUS_OK) return 2;
    ClCertificate *c = NULL;
    if (cl_lift_set(w, &c) != CL_STATUS_OK) return 3;
    if (cl_certificate_verify(c) != CL_STATUS_OK) return 4;
    char *json = NULL;
    if (cl_certificate_to_json(c, &json) != CL_STATUS_OK) return 5;
    if (strstr(json, "\"target\"") == NULL) return 6;
    cl_string_free(json);
    cl_certificate_free(c);
    if (cl_weight_new(4, values, 27, &w) != CL_STATUS_NOT_PRIME) return 7;
    if (cl_last_error() == NULL) return 8;
    cl_weight_free(w);
    puts("ok");
    return 0;
}
