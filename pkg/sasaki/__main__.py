import sasaki.main
sasaki.main.main()
