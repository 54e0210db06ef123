#include "auctionkit/cli.hpp"

int main(int argc, char** argv) {
    return auctionkit::cli_main(argc, argv);
}
