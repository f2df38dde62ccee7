#include <homolevel/cli.hpp>

int main(int argc, char** argv) { return homolevel::cli::run(argc, argv); }
