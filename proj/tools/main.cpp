#include "surfch/cli_io.hpp"

int main(int argc, char** argv)
{
    return surfch::run_main(argc, argv);
}
