// Catch2 is staged as an amalgamated pair; pulling the implementation in
// here keeps the build free of extra find_package machinery.
#include <catch2/catch_amalgamated.cpp>
