#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "startflow.h"

static char *slurp(const char *path) {
    FILE *f = fopen(path, "rb");
    if (!f) return NULL;
    fseek(f, 0, SEEK_END);
    long n = ftell(f);
    fseek(f, 0, SEEK_SET);
    char *buf = malloc((size_t)n + 1);
    if (fread(buf, 1, (size_t)n, f) != (size_t)n) { fclose(f); free(buf); return NULL; }
    buf[n] = '\0';
    fclose(f);
    return buf;
}

#define CHECK(cond) do { if (!(cond)) { fprintf(stderr, "failed: %s (%s)\n", #cond, \
    sf_last_error() ? sf_last_error() : "no error"); return 1; } } while (0)

int main(int argc, char **argv) {
    if (argc != 2) return 2;
    char *src = slurp(argv[1]);
    CHECK(src != NULL);

    SfProject *project = NULL;
    CHECK(sf_project_parse(src, &project) == SF_STATUS_OK);
    free(src);

    size_t n = 0;
    CHECK(sf_project_action_count(project, "add-certificate", &n) == SF_STATUS_OK);
    CHECK(n == 5);
    CHECK(sf_project_action_count(project, "missing", &n) == SF_STATUS_NOT_FOUND);
    CHECK(sf_last_error() != NULL);

    char *dot = NULL;
    CHECK(sf_project_dot(project, "request-caa", &dot) == SF_STATUS_OK);
    CHECK(strncmp(dot, "digraph", 7) == 0);
    sf_string_free(dot);

    char *report = NULL;
    CHECK(sf_project_check(project, NULL, &report) == SF_STATUS_OK);
    CHECK(strstr(report, "\"defects\"") != NULL);
    sf_string_free(report);

    sf_project_free(project);

    SfProject *broken = NULL;
    CHECK(sf_project_parse("project", &broken) == SF_STATUS_PARSE_ERROR);
    CHECK(broken == NULL);

    printf("startflow %s ok\n", sf_version());
    return 0;
}
