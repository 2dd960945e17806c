fn main() {
    std::process::exit(cubewcd::cli::cli_main(std::env::args_os()));
}
