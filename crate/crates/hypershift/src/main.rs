fn main() -> ! {
    hypershift::cli::run()
}
