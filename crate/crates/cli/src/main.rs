// SPDX-License-Identifier: Apache-2.0

fn main() {
    std::process::exit(exciton_chain_cli::app::run(std::env::args_os()));
}
