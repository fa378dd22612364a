#include <benchmark/benchmark.h>

// The distribution's prebuilt benchmark_main archive carries LTO bytecode
// tied to another compiler build, so main is provided here.
BENCHMARK_MAIN();
