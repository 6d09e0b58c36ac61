#include <lstvel/cli/app.hpp>

int main(int argc, char **argv)
{
    return lstvel::cli::run(argc, argv);
}
