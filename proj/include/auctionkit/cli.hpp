#pragma once

namespace auctionkit {

// Entry point behind the auctionkit binary. Exit codes: 0 success,
// 2 validation / usage error, 1 numerical failure.
int cli_main(int argc, const char* const* argv);

}  // namespace auctionkit
