/* ergolab command-line front end. Thin client of the shared-library C API:
 * argument parsing here, everything else behind ergolab_run(). */
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "ergolab.h"

static void usage(FILE* to) {
  fprintf(to,
          "usage: ergolab <command> --config PATH [--out DIR] [--grid-n N]\n"
          "\n"
          "commands:\n"
          "  exponents   derived rates, boundary constant, uniqueness status\n"
          "  solve       Dirichlet solve with the configured boundary data\n"
          "  explosive   boundary blow-up solve via the increasing-R ladder\n"
          "  ergodic     vanishing-discount estimate of the ergodic constant\n"
          "  rate        boundary-rate fit of an explosive profile\n"
          "  verify      invariant suite; exit 0 iff all requested checks pass\n"
          "\n"
          "options:\n"
          "  --config PATH   experiment config (required)\n"
          "  --out DIR       artifact directory (default: .)\n"
          "  --grid-n N      override the configured grid size\n"
          "  --version       print the library version\n");
}

int main(int argc, char** argv) {
  const char* command = NULL;
  const char* config_path = NULL;
  const char* out_dir = ".";
  int grid_n = 0;
  int i;

  for (i = 1; i < argc; ++i) {
    if (strcmp(argv[i], "--help") == 0 || strcmp(argv[i], "-h") == 0) {
      usage(stdout);
      return 0;
    } else if (strcmp(argv[i], "--version") == 0) {
      printf("ergolab %s\n", ergolab_version());
      return 0;
    } else if (strcmp(argv[i], "--config") == 0) {
      if (++i >= argc) {
        fprintf(stderr, "ergolab: --config needs a path\n");
        return 2;
      }
      config_path = argv[i];
    } else if (strcmp(argv[i], "--out") == 0) {
      if (++i >= argc) {
        fprintf(stderr, "ergolab: --out needs a directory\n");
        return 2;
      }
      out_dir = argv[i];
    } else if (strcmp(argv[i], "--grid-n") == 0) {
      if (++i >= argc) {
        fprintf(stderr, "ergolab: --grid-n needs a number\n");
        return 2;
      }
      grid_n = atoi(argv[i]);
      if (grid_n <= 0) {
        fprintf(stderr, "ergolab: --grid-n needs a positive integer\n");
        return 2;
      }
    } else if (argv[i][0] == '-') {
      fprintf(stderr, "ergolab: unknown option '%s'\n", argv[i]);
      usage(stderr);
      return 2;
    } else if (!command) {
      command = argv[i];
    } else {
      fprintf(stderr, "ergolab: unexpected argument '%s'\n", argv[i]);
      return 2;
    }
  }

  if (!command || !config_path) {
    usage(stderr);
    return 2;
  }

  {
    char errbuf[1024];
    ergolab_status st;
    errbuf[0] = '\0';
    st = ergolab_run(command, config_path, out_dir, grid_n, errbuf, sizeof errbuf);
    if (st == ERGOLAB_OK) return 0;
    fprintf(stderr, "ergolab: %s: %s\n", ergolab_status_name(st),
            errbuf[0] ? errbuf : "(no detail)");
    if (st == ERGOLAB_ERR_CONFIG || st == ERGOLAB_ERR_INVALID_ARGUMENT) return 2;
    return 1;
  }
}
