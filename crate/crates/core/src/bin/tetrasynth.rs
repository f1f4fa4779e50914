fn main() {
    std::process::exit(tetrasynth::cli::run(std::env::args_os()));
}
