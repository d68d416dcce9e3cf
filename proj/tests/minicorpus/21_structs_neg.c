void f(void)
{
    int structure = 0;
    (void)structure;
    (void)"struct";
}
